import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    // loading the embedding table from disk takes a moment on first use
    testTimeout: 60000,
  },
});
