import { defineConfig } from "vitest/config";

export default defineConfig({
  // the local form server exposes bundled assets under /static/
  base: "/static/",
  build: {
    outDir: "dist",
    emptyOutDir: true,
  },
  test: {
    environment: "jsdom",
    testTimeout: 120000,
    hookTimeout: 120000,
  },
});
