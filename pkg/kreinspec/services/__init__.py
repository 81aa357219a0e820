"""
Pipeline, file and self-test services.
"""
