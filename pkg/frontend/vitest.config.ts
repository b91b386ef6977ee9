import { defineConfig } from "vitest/config";

// Every assertion here shells out to the Python CLI (~0.8s per call on a
// cold interpreter), so the parity sweeps need far more than the default
// 5s per test.
export default defineConfig({
  test: {
    testTimeout: 600_000,
    hookTimeout: 60_000,
    fileParallelism: false,
  },
});
