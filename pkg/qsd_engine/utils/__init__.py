"""Utility modules for the QSD Engine"""
