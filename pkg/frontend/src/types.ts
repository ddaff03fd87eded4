/*
 * Wire types for the platform service HTTP API.
 *
 * These mirror the JSON the service actually emits and accepts; the UI
 * never invents fields of its own on top of them.  Stage payloads are the
 * same shapes the draft view uses, so a fetched session can be resubmitted
 * verbatim.
 */

export type ParamValue = { literal: string } | { bind: string };

export type PropSource =
	| { literal: string }
	| { extract: { url: string; xpath: string; mode: string } };

export interface PoiPayload {
	id: string;
	name: string;
	x: number;
	y: number;
	target_url: string;
	order?: number;
	code?: string;
	props?: Record<string, PropSource>;
}

export interface BandPayload {
	id: string;
	label: string;
	min: number;
	max: number;
	units: string;
}

export interface SpacePayload {
	kind: string;
	image_url?: string;
	width?: number;
	height?: number;
	pois?: PoiPayload[];
	links?: [string, string][];
	bands?: BandPayload[];
}

export interface SensorPayload {
	id: string;
	kind: string;
	context_type: string;
	radius_m?: number;
}

export interface AugmenterPayload {
	kind: string;
	anchor: string;
	position: string;
	params: Record<string, ParamValue>;
}

export interface LayerPayload {
	id: string;
	target: { url: string } | { pattern: string };
	augmenters: AugmenterPayload[];
}

export interface RulePayload {
	sensor: string;
	layer: string;
}

export interface Stage1Payload {
	name: string;
	namespace: string;
	filename: string;
}

export interface Stage2Payload {
	context_types: string[];
}

export interface Stage3Payload {
	sensors: SensorPayload[];
}

export interface Stage4Payload {
	space: SpacePayload;
}

export interface Stage5Payload {
	layers: LayerPayload[];
}

export interface Stage6Payload {
	rules: RulePayload[];
}

export type StagePayload =
	| Stage1Payload
	| Stage2Payload
	| Stage3Payload
	| Stage4Payload
	| Stage5Payload
	| Stage6Payload;

export interface DraftView {
	identity?: Stage1Payload;
	context_types?: string[];
	sensors?: SensorPayload[];
	space?: SpacePayload;
	layers?: LayerPayload[];
	rules?: RulePayload[];
}

export interface SessionView {
	id: string;
	created_at: string;
	stages_complete: boolean[];
	next_stage: number | null;
	draft: DraftView;
}

export interface ValidationIssue {
	severity: "error" | "warning";
	path: string;
	key: string;
	message: string;
	localized: string;
}

export interface ValidationReport {
	ok: boolean;
	issues: ValidationIssue[];
}

export interface StageResponse {
	report: ValidationReport;
	session: SessionView;
}

export interface PreviewWarning {
	key: string;
	detail: string;
}

export interface PreviewResponse {
	html: string;
	warnings: PreviewWarning[];
	log: unknown[];
}

// Sensor readings the preview accepts.  Same shapes as trace events, minus
// the timestamp (the service stamps t=0).
export type Reading =
	| { kind: "qr"; payload: string }
	| { kind: "nav"; url: string }
	| { kind: "scalar"; sensor: string; value: number }
	| { kind: "gps"; lat: number; lon: number }
	| { kind: "orientation"; alpha: number; beta: number; gamma: number }
	| { kind: "clock"; minutes: number };

export interface AppRecord {
	id: string;
	name: string;
	filename: string;
	author: string;
	visibility: string;
	uploaded_at: string;
	url: string;
}

export interface RequestRecord {
	id: string;
	title: string;
	description: string;
	requester: string;
	status: string;
	created_at: string;
	fulfilled_by: string | null;
}

export interface ErrorBody {
	error: { key: string; message: string; detail?: string };
	report?: ValidationReport;
	missing_stages?: number[];
}
