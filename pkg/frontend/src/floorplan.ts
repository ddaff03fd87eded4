/*
 * Floor plan canvas model for stage 4.
 *
 * Holds markers, the selected marker, and any pending link source; turns
 * gestures into edits and edits into the stage 4 payload.  Validation
 * stays on the server: submit errors come back as a report and are mapped
 * onto individual markers here for inline display.
 */

import type { PoiPayload, PropSource, SpacePayload, Stage4Payload, ValidationIssue } from "./types.js";

export interface Marker {
	id: string;
	name: string;
	x: number;
	y: number;
	targetUrl: string;
	order?: number;
	code?: string;
	props: Record<string, PropSource>;
}

export interface PlanMeta {
	kind: string;
	imageUrl?: string;
	width?: number;
	height?: number;
}

export type PositionFeed = () => { x: number; y: number };

const HOLD_MS = 500;

export class FloorplanEditor {
	plan: PlanMeta = { kind: "floorplan" };
	markers: Marker[] = [];
	links: Array<[string, string]> = [];
	selectedId: string | null = null;
	pendingLinkFrom: string | null = null;

	private counter = 0;
	private press: { x: number; y: number; at: number } | null = null;
	private readonly errors = new Map<string, ValidationIssue[]>();
	private planErrors: ValidationIssue[] = [];
	private readonly positionFeed: PositionFeed | null;

	constructor(positionFeed?: PositionFeed) {
		this.positionFeed = positionFeed ?? null;
	}

	setPlan(meta: PlanMeta): void {
		this.plan = meta;
	}

	// -- gestures ----------------------------------------------------------

	pressStart(x: number, y: number, timestamp: number): void {
		this.press = { x, y, at: timestamp };
	}

	/** Tap-and-hold on empty canvas creates a marker; a short tap deselects. */
	pressEnd(timestamp: number): Marker | null {
		const press = this.press;
		this.press = null;
		if (press === null) return null;
		if (timestamp - press.at < HOLD_MS) {
			this.selectedId = null;
			return null;
		}
		return this.placeMarker(press.x, press.y);
	}

	placeMarker(x: number, y: number): Marker {
		this.counter++;
		const marker: Marker = {
			id: `p${this.counter}`,
			name: "",
			x,
			y,
			targetUrl: "",
			props: {},
		};
		this.markers.push(marker);
		this.selectedId = marker.id;
		return marker;
	}

	placeAtCurrentPosition(): Marker {
		if (this.positionFeed === null) throw new Error("no position feed available");
		const pos = this.positionFeed();
		return this.placeMarker(pos.x, pos.y);
	}

	select(id: string): void {
		this.requireMarker(id);
		this.selectedId = id;
	}

	/** Drag target: update the marker position without any client-side clamping. */
	moveMarker(id: string, x: number, y: number): void {
		const marker = this.requireMarker(id);
		marker.x = x;
		marker.y = y;
	}

	updateMarker(id: string, fields: Partial<Omit<Marker, "id" | "props">>): void {
		const marker = this.requireMarker(id);
		Object.assign(marker, fields);
	}

	setMarkerProp(id: string, name: string, source: PropSource): void {
		this.requireMarker(id).props[name] = source;
	}

	deleteMarker(id: string): void {
		this.requireMarker(id);
		this.markers = this.markers.filter((m) => m.id !== id);
		this.links = this.links.filter(([a, b]) => a !== id && b !== id);
		if (this.selectedId === id) this.selectedId = null;
		if (this.pendingLinkFrom === id) this.pendingLinkFrom = null;
	}

	beginLink(fromId: string): void {
		this.requireMarker(fromId);
		this.pendingLinkFrom = fromId;
	}

	completeLink(toId: string): void {
		this.requireMarker(toId);
		const from = this.pendingLinkFrom;
		if (from === null) throw new Error("no link in progress");
		if (from === toId) throw new Error("cannot link a marker to itself");
		this.pendingLinkFrom = null;
		if (this.links.some(([a, b]) => a === from && b === toId)) return;
		this.links.push([from, toId]);
	}

	cancelLink(): void {
		this.pendingLinkFrom = null;
	}

	// -- payload and server feedback ----------------------------------------

	toStagePayload(): Stage4Payload {
		const space: SpacePayload = { kind: this.plan.kind };
		if (this.plan.imageUrl !== undefined) space.image_url = this.plan.imageUrl;
		if (this.plan.width !== undefined) space.width = this.plan.width;
		if (this.plan.height !== undefined) space.height = this.plan.height;
		space.pois = this.markers.map((m) => {
			const poi: PoiPayload = {
				id: m.id,
				name: m.name,
				x: m.x,
				y: m.y,
				target_url: m.targetUrl,
			};
			if (m.order !== undefined) poi.order = m.order;
			if (m.code !== undefined) poi.code = m.code;
			if (Object.keys(m.props).length > 0) poi.props = { ...m.props };
			return poi;
		});
		space.links = this.links.map(([a, b]) => [a, b]);
		space.bands = [];
		return { space };
	}

	/**
	 * Distribute report issues onto markers by path.  Server paths look like
	 * /space/poi[@id='p3'] or /space/poi[@id='p3']/prop[@name='poi-desc'];
	 * anything else under /space lands in the plan-level bucket.
	 */
	applyReport(issues: ValidationIssue[]): void {
		this.errors.clear();
		this.planErrors = [];
		for (const issue of issues) {
			const match = /^\/space\/poi\[@id='([^']*)'\]/.exec(issue.path);
			if (match !== null) {
				const id = match[1] ?? "";
				const list = this.errors.get(id) ?? [];
				list.push(issue);
				this.errors.set(id, list);
			} else if (issue.path.startsWith("/space")) {
				this.planErrors.push(issue);
			}
		}
	}

	clearReport(): void {
		this.errors.clear();
		this.planErrors = [];
	}

	errorsFor(id: string): ValidationIssue[] {
		return this.errors.get(id) ?? [];
	}

	planLevelErrors(): ValidationIssue[] {
		return this.planErrors;
	}

	private requireMarker(id: string): Marker {
		const marker = this.markers.find((m) => m.id === id);
		if (marker === undefined) throw new Error(`no marker ${id}`);
		return marker;
	}
}
