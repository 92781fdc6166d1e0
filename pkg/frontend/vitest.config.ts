import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["test/**/*.test.ts"],
    // The end-to-end test drives a live session server.
    testTimeout: 120_000,
    hookTimeout: 60_000,
  },
});
