# Shared infrastructure for classforge
