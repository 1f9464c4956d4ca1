import { defineConfig } from "vitest/config";

export default defineConfig({
  server: {
    proxy: {
      // Talk to a locally running collection service during development.
      "/batches": "http://127.0.0.1:8040",
      "/mrs": "http://127.0.0.1:8040",
      "/submissions": "http://127.0.0.1:8040",
      "/ratings": "http://127.0.0.1:8040",
      "/export": "http://127.0.0.1:8040",
      "/report": "http://127.0.0.1:8040",
    },
  },
  test: {
    environment: "jsdom",
  },
});
