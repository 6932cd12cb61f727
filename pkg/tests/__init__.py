"""pointloc 테스트."""
