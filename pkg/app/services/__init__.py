"""기하, mining, pseudo-point, 평가 알고리즘."""
