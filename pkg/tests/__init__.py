# Тесты disorder-lab
