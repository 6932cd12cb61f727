"""공통 예외."""
