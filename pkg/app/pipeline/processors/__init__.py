"""sweep 실험 프로세서 패키지."""
