"""Self-tests, golden vectors and the micro-benchmark harness."""
