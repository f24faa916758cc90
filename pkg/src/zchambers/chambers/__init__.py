"""Backtracking enumeration of positive definite principal submatrices."""
