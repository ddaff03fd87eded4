import { describe, expect, it } from "vitest";
import { PlatformClient, ServiceError } from "../src/client.js";
import { jsonResponse, sessionView, stubFetch } from "./helpers.js";

describe("request construction", () => {
	it("joins paths onto the base url, trimming trailing slashes", async () => {
		const { fetchFn, calls } = stubFetch([jsonResponse(201, sessionView())]);
		const client = new PlatformClient("http://svc.test///", fetchFn);
		await client.createSession();
		expect(calls[0]!.url).toBe("http://svc.test/sessions");
		expect(calls[0]!.method).toBe("POST");
		expect(calls[0]!.body).toEqual({});
	});

	it("sends the import id when starting from a published app", async () => {
		const { fetchFn, calls } = stubFetch([jsonResponse(201, sessionView())]);
		await new PlatformClient("http://svc.test", fetchFn).createSession("abc123");
		expect(calls[0]!.body).toEqual({ import_app: "abc123" });
	});

	it("posts stage payloads to the numbered stage", async () => {
		const { fetchFn, calls } = stubFetch([
			jsonResponse(200, { report: { ok: true, issues: [] }, session: sessionView() }),
		]);
		const client = new PlatformClient("http://svc.test", fetchFn);
		await client.submitStage("s1", 2, { context_types: ["location"] });
		expect(calls[0]!.url).toBe("http://svc.test/sessions/s1/stages/2");
		expect(calls[0]!.body).toEqual({ context_types: ["location"] });
	});

	it("omits the reading key when previewing without one", async () => {
		const { fetchFn, calls } = stubFetch([
			jsonResponse(200, { html: "", warnings: [], log: [] }),
			jsonResponse(200, { html: "", warnings: [], log: [] }),
		]);
		const client = new PlatformClient("http://svc.test", fetchFn);
		await client.preview("s1", "https://page.example/");
		await client.preview("s1", "https://page.example/", { kind: "qr", payload: "x" });
		expect(calls[0]!.body).toEqual({ page_url: "https://page.example/" });
		expect(calls[1]!.body).toEqual({
			page_url: "https://page.example/",
			reading: { kind: "qr", payload: "x" },
		});
	});

	it("publishes the spec text with optional author and visibility", async () => {
		const { fetchFn, calls } = stubFetch([jsonResponse(201, {}), jsonResponse(201, {})]);
		const client = new PlatformClient("http://svc.test", fetchFn);
		await client.publishApp("<x/>");
		await client.publishApp("<x/>", "curator", "unlisted");
		expect(calls[0]!.body).toEqual({ spec_xml: "<x/>" });
		expect(calls[1]!.body).toEqual({ spec_xml: "<x/>", author: "curator", visibility: "unlisted" });
	});

	it("unwraps the list envelopes", async () => {
		const { fetchFn } = stubFetch([
			jsonResponse(200, { apps: [{ id: "a1" }] }),
			jsonResponse(200, { requests: [{ id: "r1" }] }),
		]);
		const client = new PlatformClient("http://svc.test", fetchFn);
		expect(await client.listApps()).toEqual([{ id: "a1" }]);
		expect(await client.listRequests()).toEqual([{ id: "r1" }]);
	});

	it("returns export bytes untouched", async () => {
		const bytes = new TextEncoder().encode("<mowa-app/>\n");
		const { fetchFn, calls } = stubFetch([
			new Response(bytes, { status: 200, headers: { "content-type": "application/xml" } }),
		]);
		const out = await new PlatformClient("http://svc.test", fetchFn).exportSpec("s1");
		expect(calls[0]!.method).toBe("POST");
		expect(out).toEqual(bytes);
	});
});

describe("error handling", () => {
	it("raises ServiceError with the envelope fields", async () => {
		const { fetchFn } = stubFetch([
			jsonResponse(409, {
				error: { key: "stage.order", message: "earlier stages incomplete", detail: "stage 4" },
				missing_stages: [2, 3],
			}),
		]);
		const client = new PlatformClient("http://svc.test", fetchFn);
		const err = await client.submitStage("s1", 4, { space: { kind: "floorplan" } }).catch((e) => e);
		expect(err).toBeInstanceOf(ServiceError);
		expect(err.status).toBe(409);
		expect(err.key).toBe("stage.order");
		expect(err.detail).toBe("stage 4");
		expect(err.missingStages).toEqual([2, 3]);
	});

	it("carries the validation report when the server rejects a stage", async () => {
		const report = {
			ok: false,
			issues: [
				{
					severity: "error",
					path: "/space/poi[@id='p1']",
					key: "poi.out-of-bounds",
					message: "PoI lies outside the floor plan",
					localized: "PoI lies outside the floor plan",
				},
			],
		};
		const { fetchFn } = stubFetch([
			jsonResponse(422, { error: { key: "poi.out-of-bounds", message: "no" }, report }),
		]);
		const client = new PlatformClient("http://svc.test", fetchFn);
		const err = await client.submitStage("s1", 4, { space: { kind: "floorplan" } }).catch((e) => e);
		expect(err.report).toEqual(report);
	});

	it("synthesizes an envelope for non-JSON error bodies", async () => {
		const { fetchFn } = stubFetch([new Response("boom", { status: 502 })]);
		const err = await new PlatformClient("http://svc.test", fetchFn).listApps().catch((e) => e);
		expect(err).toBeInstanceOf(ServiceError);
		expect(err.key).toBe("http.error");
		expect(err.status).toBe(502);
	});
});
