# Numerical handlers
