"""Команда selftest: встроенная батарея проверок."""
