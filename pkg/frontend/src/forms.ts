/*
 * Form state for the list-shaped stages (1, 2, 3 and 6).
 *
 * Stage 4 has the floor plan editor and stage 5 the placement editor;
 * these four are plain field collections that serialize straight into
 * their stage payloads.
 */

import type {
	RulePayload,
	SensorPayload,
	Stage1Payload,
	Stage2Payload,
	Stage3Payload,
	Stage6Payload,
} from "./types.js";

export const CONTEXT_TYPES = ["location", "orientation", "light", "noise", "time"] as const;

export const SENSOR_KINDS = ["qr", "gps", "scalar", "orientation", "clock"] as const;

export class IdentityForm {
	name = "";
	namespace = "";
	filename = "";

	toPayload(): Stage1Payload {
		return { name: this.name, namespace: this.namespace, filename: this.filename };
	}
}

export class ContextTypesForm {
	readonly selected = new Set<string>();

	toggle(ct: string): void {
		if (this.selected.has(ct)) this.selected.delete(ct);
		else this.selected.add(ct);
	}

	toPayload(): Stage2Payload {
		// stable order so resubmits of an unchanged form are byte-identical
		return { context_types: [...CONTEXT_TYPES].filter((ct) => this.selected.has(ct)) };
	}
}

export interface SensorRow {
	id: string;
	kind: string;
	contextType: string;
	radiusM?: number;
}

export class SensorsForm {
	rows: SensorRow[] = [];

	addRow(row: SensorRow): void {
		this.rows.push(row);
	}

	removeRow(id: string): void {
		this.rows = this.rows.filter((r) => r.id !== id);
	}

	toPayload(): Stage3Payload {
		return {
			sensors: this.rows.map((row) => {
				const out: SensorPayload = {
					id: row.id,
					kind: row.kind,
					context_type: row.contextType,
				};
				if (row.radiusM !== undefined) out.radius_m = row.radiusM;
				return out;
			}),
		};
	}
}

export class RulesForm {
	rows: RulePayload[] = [];

	addRule(sensor: string, layer: string): void {
		this.rows.push({ sensor, layer });
	}

	removeRule(index: number): void {
		this.rows.splice(index, 1);
	}

	toPayload(): Stage6Payload {
		return { rules: this.rows.map((r) => ({ ...r })) };
	}
}
