# Community-aware link prediction - Source Package
