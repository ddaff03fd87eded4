/*
 * Augmenter palette and layer placement for stage 5.
 *
 * The catalog below is a copy of the runtime's augmenter registry; the
 * palette filters it by overlap with the context types chosen in stage 2,
 * the same rule the runtime's suggestion helper applies.  Dropping a kind
 * onto the preview records the anchor XPath of the element it landed on
 * plus a relative position.
 */

import { computeXPath, type ElementLike } from "./xpath.js";
import type { AugmenterPayload, LayerPayload, ParamValue, Stage5Payload } from "./types.js";

export interface ParamSpec {
	name: string;
	hint: string;
	required: boolean;
}

export interface PaletteEntry {
	kind: string;
	contextTypes: readonly string[];
	params: readonly ParamSpec[];
}

export const CATALOG: readonly PaletteEntry[] = [
	{
		kind: "poi-info-panel",
		contextTypes: ["location"],
		params: [
			{ name: "title", hint: "panel heading", required: true },
			{ name: "description", hint: "panel body text", required: true },
			{ name: "image-url", hint: "panel picture source", required: true },
		],
	},
	{
		kind: "hypermedia-nav",
		contextTypes: ["location"],
		params: [],
	},
	{
		kind: "scalar-badge",
		contextTypes: ["light", "noise", "time", "orientation"],
		params: [{ name: "label-prefix", hint: "text before the band label", required: true }],
	},
	{
		kind: "media-volume-adapter",
		contextTypes: ["noise"],
		params: [{ name: "media-xpath", hint: "where the media elements live", required: true }],
	},
	{
		kind: "text-injector",
		contextTypes: ["location", "orientation", "light", "noise", "time"],
		params: [{ name: "text", hint: "the text to inject", required: true }],
	},
];

export function suggest(selected: Iterable<string>): PaletteEntry[] {
	const chosen = new Set(selected);
	return CATALOG.filter((entry) => entry.contextTypes.some((ct) => chosen.has(ct)));
}

export const POSITIONS = ["before", "after", "first_child", "last_child", "replace_children"] as const;

export type Position = (typeof POSITIONS)[number];

export interface PlacedAugmenter {
	kind: string;
	anchor: string;
	position: Position;
	params: Record<string, ParamValue>;
}

export interface LayerDraft {
	id: string;
	target: { url: string } | { pattern: string };
	augmenters: PlacedAugmenter[];
}

/** POI fields the bind picker offers; mirrors the spec binding grammar. */
export const POI_FIELDS = ["name", "target_url", "code"] as const;

export class PlacementEditor {
	layers: LayerDraft[] = [];
	private palette: PaletteEntry[] = [];

	setContextTypes(types: Iterable<string>): void {
		this.palette = suggest(types);
	}

	availableKinds(): string[] {
		return this.palette.map((e) => e.kind);
	}

	paramSpecs(kind: string): readonly ParamSpec[] {
		const entry = CATALOG.find((e) => e.kind === kind);
		if (entry === undefined) throw new Error(`unknown augmenter kind ${kind}`);
		return entry.params;
	}

	addLayer(id: string, target: { url: string } | { pattern: string }): LayerDraft {
		const layer: LayerDraft = { id, target, augmenters: [] };
		this.layers.push(layer);
		return layer;
	}

	/**
	 * Drop a palette entry onto an element of the preview pane.  Only kinds
	 * the palette currently offers can be dropped; the anchor is captured
	 * from the drop target.
	 */
	drop(layerId: string, kind: string, target: ElementLike, position: Position): PlacedAugmenter {
		return this.dropAt(layerId, kind, computeXPath(target), position);
	}

	dropAt(layerId: string, kind: string, anchor: string, position: Position): PlacedAugmenter {
		if (!this.palette.some((e) => e.kind === kind)) {
			throw new Error(`augmenter ${kind} is not in the palette for the selected context types`);
		}
		const layer = this.requireLayer(layerId);
		const placed: PlacedAugmenter = { kind, anchor, position, params: {} };
		layer.augmenters.push(placed);
		return placed;
	}

	setParamLiteral(placed: PlacedAugmenter, name: string, value: string): void {
		placed.params[name] = { literal: value };
	}

	bindParamToPoiField(placed: PlacedAugmenter, name: string, field: (typeof POI_FIELDS)[number]): void {
		placed.params[name] = { bind: `poi.${field}` };
	}

	bindParamToPoiProp(placed: PlacedAugmenter, name: string, prop: string): void {
		if (prop === "") throw new Error("property name must not be empty");
		placed.params[name] = { bind: `poi.prop:${prop}` };
	}

	/** Extraction assistant: clicking an element on a page snapshot captures its path. */
	bindParamToExtraction(placed: PlacedAugmenter, name: string, url: string, el: ElementLike, mode: string): void {
		placed.params[name] = { bind: `extract:${url}#${computeXPath(el)}#${mode}` };
	}

	missingParams(placed: PlacedAugmenter): string[] {
		return this.paramSpecs(placed.kind)
			.filter((spec) => spec.required && placed.params[spec.name] === undefined)
			.map((spec) => spec.name);
	}

	toStagePayload(): Stage5Payload {
		const layers: LayerPayload[] = this.layers.map((layer) => ({
			id: layer.id,
			target: layer.target,
			augmenters: layer.augmenters.map((placed): AugmenterPayload => ({
				kind: placed.kind,
				anchor: placed.anchor,
				position: placed.position,
				params: { ...placed.params },
			})),
		}));
		return { layers };
	}

	private requireLayer(id: string): LayerDraft {
		const layer = this.layers.find((l) => l.id === id);
		if (layer === undefined) throw new Error(`no layer ${id}`);
		return layer;
	}
}
