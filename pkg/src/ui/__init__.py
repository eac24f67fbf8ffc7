# Reporting package - text reports and sweep charts
