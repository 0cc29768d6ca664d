class CommandsData:
    """Имена команд и подкоманд командной строки"""

    COMPUTE: str = "compute"
    GEODESIC: str = "geodesic"
    CHECK: str = "check"
    SELFTEST: str = "selftest"

    COMPUTE_TABLES: tuple = ("christoffel", "torsion", "riemann", "ricci", "inverse")
    CHECK_KINDS: tuple = ("natural", "einstein-split", "decomposition")
    FORMATS: tuple = ("json", "table")


class MessagesData:
    # Общие
    ERROR_DEFAULT: str = "⚠️ Непредвиденная ошибка: {error}"
    ERROR_INPUT: str = "❌ Ошибка входных данных: {error}"
    ERROR_RUNTIME: str = "❌ Ошибка вычисления: {error}"
    ERROR_VERIFICATION: str = "❗ Тождество не выполнено: {error}"
    ERROR_START_FORMAT: str = "Формат --start: 'x1,x2,...;v1,v2,...'"

    # Проверки
    CHECK_PASSED: str = "✅ {name}: пройдено"
    CHECK_FAILED: str = "❌ {name}: не пройдено"
    CHECK_DEVIATION: str = "⚠️ Константа {name} = {value:.6g} отличается от 9/16"
    CHECK_UNDETERMINED: str = "Константа {name} не определена (ω-слагаемые нулевые)"

    # Самопроверка
    SELFTEST_HEADER: str = "Самопроверка: {count} проверок"
    SELFTEST_SUMMARY: str = "Итого: пройдено {passed} из {total}"
    SELFTEST_UNKNOWN: str = "Нет проверок, подходящих под фильтр '{filter}'"

    # Описания команд
    HELP_MAIN: str = "Вычисления с итерированными формами и связностями тензора τ = g + ω"
    HELP_COMPUTE: str = "Таблицы компонент: символы Кристоффеля, кручение, Риман, Риччи, g^-1"
    HELP_GEODESIC: str = "Интегрирование уравнения геодезических (RK4)"
    HELP_CHECK: str = "Невязки естественных уравнений и их расщепления"
    HELP_SELFTEST: str = "Прогон встроенной батареи проверок"
