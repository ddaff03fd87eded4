/*
 * Preview pane.
 *
 * The pane shows whatever HTML the service's preview endpoint returned,
 * unmodified.  No augmentation happens in the browser; rendering is a
 * single innerHTML assignment of the stored string, so what the user sees
 * is exactly what the weaver produced.
 */

import type { PlatformClient } from "./client.js";
import { ServiceError } from "./client.js";
import type { PreviewWarning, Reading } from "./types.js";

export type PaneState = "empty" | "ready" | "guidance";

export class PreviewPane {
	state: PaneState = "empty";
	html = "";
	warnings: PreviewWarning[] = [];
	/** error key shown when the draft is not previewable yet */
	guidanceKey: string | null = null;
	pageUrl: string | null = null;
	lastReading: Reading | null = null;

	async load(client: PlatformClient, sessionId: string, pageUrl: string, reading?: Reading): Promise<void> {
		this.pageUrl = pageUrl;
		this.lastReading = reading ?? null;
		try {
			const res = await client.preview(sessionId, pageUrl, reading);
			this.html = res.html;
			this.warnings = res.warnings;
			this.state = "ready";
			this.guidanceKey = null;
		} catch (exc) {
			if (exc instanceof ServiceError && (exc.status === 412 || exc.status === 404)) {
				this.html = "";
				this.warnings = [];
				this.state = "guidance";
				this.guidanceKey = exc.key;
				return;
			}
			throw exc;
		}
	}

	/** Verbatim assignment; never parse, rewrite, or sanitize the response. */
	render(target: { innerHTML: string }): void {
		target.innerHTML = this.html;
	}

	clear(): void {
		this.state = "empty";
		this.html = "";
		this.warnings = [];
		this.guidanceKey = null;
		this.pageUrl = null;
		this.lastReading = null;
	}
}
