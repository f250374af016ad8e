"""
Package compression - Codeur LZ intégré et mesure du taux de compression
"""
