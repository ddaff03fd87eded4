import type { FetchLike } from "../src/client.js";
import type { SessionView } from "../src/types.js";

export function jsonResponse(status: number, body: unknown): Response {
	return new Response(JSON.stringify(body), {
		status,
		headers: { "content-type": "application/json" },
	});
}

export interface RecordedCall {
	url: string;
	method: string;
	body: unknown;
}

/** Queue-backed fetch stub that records every request it serves. */
export function stubFetch(responses: Response[]): { fetchFn: FetchLike; calls: RecordedCall[] } {
	const calls: RecordedCall[] = [];
	const queue = [...responses];
	const fetchFn: FetchLike = async (url, init) => {
		calls.push({
			url,
			method: init?.method ?? "GET",
			body: typeof init?.body === "string" ? JSON.parse(init.body) : undefined,
		});
		const next = queue.shift();
		if (next === undefined) throw new Error(`no canned response left for ${url}`);
		return next;
	};
	return { fetchFn, calls };
}

export function sessionView(overrides: Partial<SessionView> = {}): SessionView {
	return {
		id: "s-test",
		created_at: "2026-01-01T00:00:00Z",
		stages_complete: [false, false, false, false, false, false],
		next_stage: 1,
		draft: {},
		...overrides,
	};
}
