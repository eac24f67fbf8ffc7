# Embedding package
