"""
Package analysis - Benchmark, métriques pondérées et validation
"""
