"""Команда geodesic: интегрирование геодезических."""
