import { defineConfig } from "vitest/config";

export default defineConfig({
	test: {
		include: ["tests/**/*.test.ts"],
		// the integration suite boots the real platform service
		testTimeout: 30000,
		hookTimeout: 30000,
	},
});
