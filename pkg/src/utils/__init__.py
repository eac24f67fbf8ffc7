# Utilities - configuration, errors and logging
