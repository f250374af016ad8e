"""
Package corpus - Profils de langage et exploration des systèmes
"""
