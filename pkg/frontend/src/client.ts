/*
 * Typed client for the platform service.
 *
 * Every UI action round-trips through here; there is no local fallback
 * path.  The fetch implementation is injectable so tests can substitute a
 * canned transport.
 */

import type {
	AppRecord,
	ErrorBody,
	PreviewResponse,
	Reading,
	RequestRecord,
	SessionView,
	StagePayload,
	StageResponse,
	ValidationReport,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ServiceError extends Error {
	readonly status: number;
	readonly key: string;
	readonly detail?: string;
	readonly report?: ValidationReport;
	readonly missingStages?: number[];

	constructor(status: number, body: ErrorBody) {
		super(body.error.message);
		this.name = "ServiceError";
		this.status = status;
		this.key = body.error.key;
		this.detail = body.error.detail;
		this.report = body.report;
		this.missingStages = body.missing_stages;
	}
}

export class PlatformClient {
	private readonly base: string;
	private readonly fetchFn: FetchLike;

	constructor(baseUrl: string, fetchFn?: FetchLike) {
		this.base = baseUrl.replace(/\/+$/, "");
		// bind: bare window.fetch throws "Illegal invocation" when detached
		this.fetchFn = fetchFn ?? ((url, init) => globalThis.fetch(url, init));
	}

	async createSession(importApp?: string): Promise<SessionView> {
		const body = importApp === undefined ? {} : { import_app: importApp };
		return this.json<SessionView>("POST", "/sessions", body);
	}

	async getSession(id: string): Promise<SessionView> {
		return this.json<SessionView>("GET", `/sessions/${id}`);
	}

	async submitStage(id: string, stage: number, payload: StagePayload): Promise<StageResponse> {
		return this.json<StageResponse>("POST", `/sessions/${id}/stages/${stage}`, payload);
	}

	async preview(id: string, pageUrl: string, reading?: Reading): Promise<PreviewResponse> {
		const body: Record<string, unknown> = { page_url: pageUrl };
		if (reading !== undefined) body.reading = reading;
		return this.json<PreviewResponse>("POST", `/sessions/${id}/preview`, body);
	}

	/** Canonical XML bytes of the finished draft. 409 until all stages pass. */
	async exportSpec(id: string): Promise<Uint8Array> {
		const res = await this.fetchFn(`${this.base}/sessions/${id}/export`, { method: "POST" });
		if (!res.ok) throw new ServiceError(res.status, await this.errorBody(res));
		return new Uint8Array(await res.arrayBuffer());
	}

	async publishApp(specXml: string, author?: string, visibility?: string): Promise<AppRecord> {
		const body: Record<string, unknown> = { spec_xml: specXml };
		if (author !== undefined) body.author = author;
		if (visibility !== undefined) body.visibility = visibility;
		return this.json<AppRecord>("POST", "/apps", body);
	}

	async listApps(): Promise<AppRecord[]> {
		const body = await this.json<{ apps: AppRecord[] }>("GET", "/apps");
		return body.apps;
	}

	async getAppXml(id: string): Promise<Uint8Array> {
		const res = await this.fetchFn(`${this.base}/apps/${id}`, { method: "GET" });
		if (!res.ok) throw new ServiceError(res.status, await this.errorBody(res));
		return new Uint8Array(await res.arrayBuffer());
	}

	async createRequest(title: string, description?: string, requester?: string): Promise<RequestRecord> {
		const body: Record<string, unknown> = { title };
		if (description !== undefined) body.description = description;
		if (requester !== undefined) body.requester = requester;
		return this.json<RequestRecord>("POST", "/requests", body);
	}

	async listRequests(): Promise<RequestRecord[]> {
		const body = await this.json<{ requests: RequestRecord[] }>("GET", "/requests");
		return body.requests;
	}

	async fulfillRequest(id: string, appId: string): Promise<RequestRecord> {
		return this.json<RequestRecord>("POST", `/requests/${id}/fulfill`, { app_id: appId });
	}

	private async json<T>(method: string, path: string, body?: unknown): Promise<T> {
		const init: RequestInit = { method };
		if (body !== undefined) {
			init.headers = { "content-type": "application/json" };
			init.body = JSON.stringify(body);
		}
		const res = await this.fetchFn(this.base + path, init);
		if (!res.ok) throw new ServiceError(res.status, await this.errorBody(res));
		return (await res.json()) as T;
	}

	private async errorBody(res: Response): Promise<ErrorBody> {
		try {
			const body = (await res.json()) as ErrorBody;
			if (body && typeof body === "object" && body.error) return body;
		} catch {
			// non-JSON error page; fall through to the synthetic body
		}
		return { error: { key: "http.error", message: `HTTP ${res.status}` } };
	}
}
