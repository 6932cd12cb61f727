"""재현 가능한 난수 도우미."""
