"""pointloc - point 감독 시공간 액션 위치 추정."""
