"""
grandpolar Tests Package

Unit tests per subpackage plus the acceptance suite (test_acceptance,
enabled with GRANDPOLAR_SLOW_TESTS=1).
"""
