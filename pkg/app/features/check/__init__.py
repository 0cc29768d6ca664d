"""Команда check: невязки уравнений поля."""
