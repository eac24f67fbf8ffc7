# Prediction package
