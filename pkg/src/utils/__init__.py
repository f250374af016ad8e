"""
Package utils - Configuration, erreurs et stockage
"""
