/*
 * Browser bootstrap.
 *
 * Wires the wizard models to a bare DOM shell: stage tabs across the top,
 * the active stage's form in the middle, floor plan canvas and preview
 * pane side by side below.  All durable state lives in the controller and
 * its editors; this file translates DOM events into controller calls and
 * repaints from scratch after each one.
 */

import { PlatformClient, ServiceError } from "./client.js";
import { STAGE_COUNT, STAGE_LABELS, WizardController } from "./wizard.js";
import { ContextTypesForm, CONTEXT_TYPES, IdentityForm, RulesForm, SENSOR_KINDS, SensorsForm } from "./forms.js";
import { LOCALES, type Locale } from "./i18n.js";

export function mountWizard(root: HTMLElement, baseUrl: string): WizardController {
	const wizard = new WizardController(new PlatformClient(baseUrl));
	const identity = new IdentityForm();
	const contextTypes = new ContextTypesForm();
	const sensors = new SensorsForm();
	const rules = new RulesForm();

	let activeStage = 1;
	let statusLine = "";

	const tabs = document.createElement("nav");
	const status = document.createElement("p");
	const form = document.createElement("section");
	const canvas = document.createElement("div");
	const pane = document.createElement("div");
	const localeSelect = document.createElement("select");

	canvas.className = "floorplan";
	pane.className = "preview";
	for (const loc of LOCALES) {
		const opt = document.createElement("option");
		opt.value = loc;
		opt.textContent = loc;
		localeSelect.appendChild(opt);
	}
	localeSelect.addEventListener("change", () => {
		wizard.locale.switchTo(localeSelect.value as Locale);
		paint();
	});
	root.replaceChildren(tabs, localeSelect, status, form, canvas, pane);

	function run(action: () => Promise<unknown>): void {
		void (async () => {
			try {
				await action();
				statusLine = "";
			} catch (exc) {
				statusLine = exc instanceof ServiceError ? wizard.locale.t(exc.key) : String(exc);
			}
			paint();
		})();
	}

	function field(label: string, value: string, oninput: (v: string) => void): HTMLLabelElement {
		const wrap = document.createElement("label");
		wrap.textContent = label;
		const input = document.createElement("input");
		input.value = value;
		input.addEventListener("input", () => oninput(input.value));
		wrap.appendChild(input);
		return wrap;
	}

	function submitButton(onclick: () => void): HTMLButtonElement {
		const btn = document.createElement("button");
		btn.textContent = "save stage";
		btn.addEventListener("click", onclick);
		return btn;
	}

	function paintForm(): void {
		form.replaceChildren();
		switch (activeStage) {
			case 1: {
				form.append(
					field("name", identity.name, (v) => (identity.name = v)),
					field("namespace", identity.namespace, (v) => (identity.namespace = v)),
					field("filename", identity.filename, (v) => (identity.filename = v)),
					submitButton(() => run(() => wizard.submitIdentity(identity.toPayload()))),
				);
				break;
			}
			case 2: {
				for (const ct of CONTEXT_TYPES) {
					const wrap = document.createElement("label");
					const box = document.createElement("input");
					box.type = "checkbox";
					box.checked = contextTypes.selected.has(ct);
					box.addEventListener("change", () => contextTypes.toggle(ct));
					wrap.append(box, ct);
					form.appendChild(wrap);
				}
				form.appendChild(submitButton(() => run(() => wizard.submitContextTypes(contextTypes.toPayload()))));
				break;
			}
			case 3: {
				for (const row of sensors.rows) {
					const line = document.createElement("div");
					line.textContent = `${row.id} (${row.kind} -> ${row.contextType})`;
					const del = document.createElement("button");
					del.textContent = "remove";
					del.addEventListener("click", () => {
						sensors.removeRow(row.id);
						paint();
					});
					line.appendChild(del);
					form.appendChild(line);
				}
				const id = document.createElement("input");
				const kind = document.createElement("select");
				for (const k of SENSOR_KINDS) {
					const opt = document.createElement("option");
					opt.value = k;
					opt.textContent = k;
					kind.appendChild(opt);
				}
				const ct = document.createElement("input");
				const add = document.createElement("button");
				add.textContent = "add sensor";
				add.addEventListener("click", () => {
					sensors.addRow({ id: id.value, kind: kind.value, contextType: ct.value });
					paint();
				});
				form.append(id, kind, ct, add, submitButton(() => run(() => wizard.submitSensors(sensors.toPayload()))));
				break;
			}
			case 4: {
				form.appendChild(submitButton(() => run(() => wizard.submitSpace())));
				const current = document.createElement("button");
				current.textContent = "marker at current position";
				current.addEventListener("click", () => {
					wizard.floorplan.placeAtCurrentPosition();
					paint();
				});
				form.appendChild(current);
				break;
			}
			case 5: {
				for (const kind of wizard.placement.availableKinds()) {
					const chip = document.createElement("button");
					chip.className = "palette-entry";
					chip.textContent = kind;
					chip.draggable = true;
					form.appendChild(chip);
				}
				form.appendChild(submitButton(() => run(() => wizard.submitLayers())));
				break;
			}
			case 6: {
				for (const [i, row] of rules.rows.entries()) {
					const line = document.createElement("div");
					line.textContent = `${row.sensor} -> ${row.layer}`;
					const del = document.createElement("button");
					del.textContent = "remove";
					del.addEventListener("click", () => {
						rules.removeRule(i);
						paint();
					});
					line.appendChild(del);
					form.appendChild(line);
				}
				const sensor = document.createElement("input");
				const layer = document.createElement("input");
				const add = document.createElement("button");
				add.textContent = "add rule";
				add.addEventListener("click", () => {
					rules.addRule(sensor.value, layer.value);
					paint();
				});
				form.append(sensor, layer, add, submitButton(() => run(() => wizard.submitRules(rules.toPayload()))));
				break;
			}
		}
	}

	function paintCanvas(): void {
		canvas.replaceChildren();
		for (const marker of wizard.floorplan.markers) {
			const dot = document.createElement("span");
			dot.className = marker.id === wizard.floorplan.selectedId ? "marker selected" : "marker";
			dot.style.left = `${marker.x}px`;
			dot.style.top = `${marker.y}px`;
			dot.title = marker.name || marker.id;
			const issues = wizard.floorplan.errorsFor(marker.id);
			if (issues.length > 0) {
				dot.classList.add("invalid");
				dot.title += ": " + issues.map((i) => i.localized).join("; ");
			}
			dot.addEventListener("pointerdown", (ev) => {
				ev.stopPropagation();
				wizard.floorplan.select(marker.id);
				paint();
			});
			canvas.appendChild(dot);
		}
	}

	function paint(): void {
		tabs.replaceChildren();
		for (let n = 1; n <= STAGE_COUNT; n++) {
			const tab = document.createElement("button");
			tab.textContent = `${n}. ${STAGE_LABELS[n - 1]}`;
			tab.disabled = !wizard.stageEnabled(n);
			if (n === activeStage) tab.classList.add("active");
			tab.addEventListener("click", () => {
				activeStage = n;
				paint();
			});
			tabs.appendChild(tab);
		}
		status.textContent = statusLine;
		paintForm();
		paintCanvas();
		wizard.preview.render(pane);
		if (wizard.preview.state === "guidance" && wizard.preview.guidanceKey !== null) {
			pane.textContent = wizard.locale.t(wizard.preview.guidanceKey);
		}
	}

	canvas.addEventListener("pointerdown", (ev) => {
		wizard.floorplan.pressStart(ev.offsetX, ev.offsetY, ev.timeStamp);
	});
	canvas.addEventListener("pointerup", (ev) => {
		wizard.floorplan.pressEnd(ev.timeStamp);
		paint();
	});

	run(() => wizard.start());
	paint();
	return wizard;
}

declare global {
	interface Window {
		mowaWizard?: WizardController;
	}
}

if (typeof document !== "undefined" && document.getElementById("mowa-wizard") !== null) {
	const root = document.getElementById("mowa-wizard") as HTMLElement;
	window.mowaWizard = mountWizard(root, root.dataset.service ?? "");
}
