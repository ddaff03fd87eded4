/*
 * Wizard state for the six authoring stages.
 *
 * The controller never trusts its own bookkeeping over the server's: the
 * session view that came back from the last round trip decides which stage
 * tabs are enabled, and every submit replaces that view wholesale.  There
 * is no optimistic path; a failed submit leaves the view untouched and
 * surfaces the report.
 */

import { PlatformClient, ServiceError } from "./client.js";
import { FloorplanEditor, type PositionFeed } from "./floorplan.js";
import { PlacementEditor } from "./palette.js";
import { PreviewPane } from "./preview.js";
import { LocaleSwitcher } from "./i18n.js";
import type {
	AppRecord,
	SessionView,
	Stage1Payload,
	Stage2Payload,
	Stage3Payload,
	Stage6Payload,
	StagePayload,
	ValidationReport,
} from "./types.js";

export const STAGE_COUNT = 6;

export const STAGE_LABELS = [
	"identity",
	"context types",
	"sensors",
	"space",
	"layers",
	"rules",
] as const;

export class StageLocked extends Error {
	constructor(stage: number) {
		super(`stage ${stage} is locked until earlier stages pass`);
		this.name = "StageLocked";
	}
}

export class WizardController {
	readonly client: PlatformClient;
	readonly floorplan: FloorplanEditor;
	readonly placement = new PlacementEditor();
	readonly preview = new PreviewPane();
	readonly locale = new LocaleSwitcher();

	view: SessionView | null = null;
	lastReport: ValidationReport | null = null;

	constructor(client: PlatformClient, positionFeed?: PositionFeed) {
		this.client = client;
		this.floorplan = new FloorplanEditor(positionFeed);
	}

	async start(importApp?: string): Promise<SessionView> {
		this.view = await this.client.createSession(importApp);
		this.lastReport = null;
		this.syncEditors();
		return this.view;
	}

	async refresh(): Promise<SessionView> {
		const view = this.requireView();
		this.view = await this.client.getSession(view.id);
		return this.view;
	}

	get sessionId(): string {
		return this.requireView().id;
	}

	/** A tab unlocks only once the server reports all earlier stages done. */
	stageEnabled(stage: number): boolean {
		if (stage < 1 || stage > STAGE_COUNT) return false;
		const view = this.view;
		if (view === null) return false;
		for (let n = 1; n < stage; n++) {
			if (!view.stages_complete[n - 1]) return false;
		}
		return true;
	}

	enabledStages(): number[] {
		const out: number[] = [];
		for (let n = 1; n <= STAGE_COUNT; n++) {
			if (this.stageEnabled(n)) out.push(n);
		}
		return out;
	}

	currentStage(): number {
		const view = this.requireView();
		return view.next_stage ?? STAGE_COUNT;
	}

	async submitStage(stage: number, payload: StagePayload): Promise<ValidationReport> {
		const view = this.requireView();
		if (!this.stageEnabled(stage)) throw new StageLocked(stage);
		try {
			const res = await this.client.submitStage(view.id, stage, payload);
			this.view = res.session;
			this.lastReport = res.report;
			if (stage === 4) this.floorplan.clearReport();
			return res.report;
		} catch (exc) {
			if (exc instanceof ServiceError && exc.report !== undefined) {
				this.lastReport = exc.report;
				if (stage === 4) this.floorplan.applyReport(exc.report.issues);
			}
			throw exc;
		}
	}

	async submitIdentity(payload: Stage1Payload): Promise<ValidationReport> {
		return this.submitStage(1, payload);
	}

	async submitContextTypes(payload: Stage2Payload): Promise<ValidationReport> {
		const report = await this.submitStage(2, payload);
		this.placement.setContextTypes(payload.context_types);
		return report;
	}

	async submitSensors(payload: Stage3Payload): Promise<ValidationReport> {
		return this.submitStage(3, payload);
	}

	async submitSpace(): Promise<ValidationReport> {
		return this.submitStage(4, this.floorplan.toStagePayload());
	}

	async submitLayers(): Promise<ValidationReport> {
		return this.submitStage(5, this.placement.toStagePayload());
	}

	async submitRules(payload: Stage6Payload): Promise<ValidationReport> {
		return this.submitStage(6, payload);
	}

	async loadPreview(pageUrl: string, reading?: Parameters<PreviewPane["load"]>[3]): Promise<void> {
		await this.preview.load(this.client, this.sessionId, pageUrl, reading);
	}

	async exportSpec(): Promise<Uint8Array> {
		return this.client.exportSpec(this.sessionId);
	}

	async publish(author?: string, visibility?: string): Promise<AppRecord> {
		const bytes = await this.exportSpec();
		return this.client.publishApp(new TextDecoder().decode(bytes), author, visibility);
	}

	/** Seed the editors from a fetched draft (used after import). */
	private syncEditors(): void {
		const draft = this.view?.draft;
		if (draft === undefined) return;
		if (draft.context_types !== undefined) {
			this.placement.setContextTypes(draft.context_types);
		}
		if (draft.space !== undefined) {
			this.floorplan.setPlan({
				kind: draft.space.kind,
				imageUrl: draft.space.image_url,
				width: draft.space.width,
				height: draft.space.height,
			});
		}
	}

	private requireView(): SessionView {
		if (this.view === null) throw new Error("no session started");
		return this.view;
	}
}
