# Configuration for classforge
