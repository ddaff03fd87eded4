import { describe, expect, it } from "vitest";
import { ContextTypesForm, IdentityForm, RulesForm, SensorsForm } from "../src/forms.js";

describe("stage forms", () => {
	it("identity form serializes its three fields", () => {
		const form = new IdentityForm();
		form.name = "Pleistocene Hall Tour";
		form.namespace = "museum.example";
		form.filename = "museum-tour";
		expect(form.toPayload()).toEqual({
			name: "Pleistocene Hall Tour",
			namespace: "museum.example",
			filename: "museum-tour",
		});
	});

	it("context types keep canonical order regardless of toggle order", () => {
		const form = new ContextTypesForm();
		form.toggle("noise");
		form.toggle("location");
		expect(form.toPayload()).toEqual({ context_types: ["location", "noise"] });
		form.toggle("noise");
		expect(form.toPayload()).toEqual({ context_types: ["location"] });
	});

	it("sensor rows include the radius only when set", () => {
		const form = new SensorsForm();
		form.addRow({ id: "qr1", kind: "qr", contextType: "location" });
		form.addRow({ id: "gps1", kind: "gps", contextType: "location", radiusM: 15 });
		expect(form.toPayload()).toEqual({
			sensors: [
				{ id: "qr1", kind: "qr", context_type: "location" },
				{ id: "gps1", kind: "gps", context_type: "location", radius_m: 15 },
			],
		});
		form.removeRow("qr1");
		expect(form.toPayload().sensors.map((s) => s.id)).toEqual(["gps1"]);
	});

	it("rules form is an ordered pair list", () => {
		const form = new RulesForm();
		form.addRule("qr1", "tour");
		form.addRule("db1", "volume");
		form.removeRule(0);
		expect(form.toPayload()).toEqual({ rules: [{ sensor: "db1", layer: "volume" }] });
	});
});
