"""Команда compute: таблицы компонент."""
