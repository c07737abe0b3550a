import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    // The integration test boots the real annotation service in a child
    // process, which takes a few seconds on first import.
    testTimeout: 30_000,
    hookTimeout: 30_000,
  },
});
