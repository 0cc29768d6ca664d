"""
Настройки и конфигурация вычислителя
"""

import logging
import os
from typing import Any, Dict

from dotenv import load_dotenv

# Загружаем переменные окружения
load_dotenv()

logger = logging.getLogger(__name__)


class CalcConfig:
    """Конфигурация вычислителя"""

    def __init__(self):
        self._load_config()

    def _load_config(self):
        """Загружает конфигурацию из переменных окружения"""
        # Случайные проверки тождеств
        self.SEED = int(os.getenv("ITERFORMS_SEED", "42"))
        self.TRIALS = int(os.getenv("ITERFORMS_TRIALS", "32"))
        self.TOLERANCE = float(os.getenv("ITERFORMS_TOLERANCE", "1e-9"))
        self.MAX_RETRIES = int(os.getenv("ITERFORMS_MAX_RETRIES", "10"))

        # Алгебра итерированных форм
        self.DEPTH_CAP = int(os.getenv("ITERFORMS_DEPTH", "3"))
        self.ALGEBRA_TRIALS = int(os.getenv("ITERFORMS_ALGEBRA_TRIALS", "10000"))

        # Численные проверки
        self.SAMPLE_POINTS = int(os.getenv("ITERFORMS_SAMPLE_POINTS", "20"))
        self.MAX_DIMENSION = int(os.getenv("ITERFORMS_MAX_DIMENSION", "6"))
        self.DET_FLOOR = float(os.getenv("ITERFORMS_DET_FLOOR", "1e-12"))
        self.ORACLE_TOLERANCE = float(os.getenv("ITERFORMS_ORACLE_TOLERANCE", "1e-6"))
        self.FD_STEP = float(os.getenv("ITERFORMS_FD_STEP", "1e-5"))
        self.RESIDUAL_TOLERANCE = float(os.getenv("ITERFORMS_RESIDUAL_TOLERANCE", "1e-8"))

        # Настройки логирования
        self.LOG_LEVEL = os.getenv("LOG_LEVEL", "WARNING")
        self.LOG_FILE = os.getenv("LOG_FILE", "")

        self._validate()
        logger.debug("Конфигурация загружена успешно")

    def _validate(self):
        """Проверяет диапазоны значений"""
        if self.TRIALS < 1:
            raise ValueError("ITERFORMS_TRIALS должен быть не меньше 1")
        if self.DEPTH_CAP < 1:
            raise ValueError("ITERFORMS_DEPTH должен быть не меньше 1")
        if self.SAMPLE_POINTS < 1:
            raise ValueError("ITERFORMS_SAMPLE_POINTS должен быть не меньше 1")
        if self.TOLERANCE <= 0 or self.FD_STEP <= 0:
            raise ValueError("Допуски и шаг дифференцирования должны быть положительными")

    def get_all_settings(self) -> Dict[str, Any]:
        """Возвращает все настройки в виде словаря"""
        return {
            "seed": self.SEED,
            "trials": self.TRIALS,
            "tolerance": self.TOLERANCE,
            "max_retries": self.MAX_RETRIES,
            "depth_cap": self.DEPTH_CAP,
            "algebra_trials": self.ALGEBRA_TRIALS,
            "sample_points": self.SAMPLE_POINTS,
            "max_dimension": self.MAX_DIMENSION,
            "det_floor": self.DET_FLOOR,
            "oracle_tolerance": self.ORACLE_TOLERANCE,
            "fd_step": self.FD_STEP,
            "residual_tolerance": self.RESIDUAL_TOLERANCE,
            "log_level": self.LOG_LEVEL,
            "log_file": self.LOG_FILE,
        }


# Глобальный экземпляр конфигурации
config = CalcConfig()
