"""UAV trajectory planning for sensor-network data collection."""
