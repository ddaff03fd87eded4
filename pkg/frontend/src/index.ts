export { PlatformClient, ServiceError, type FetchLike } from "./client.js";
export { WizardController, StageLocked, STAGE_COUNT, STAGE_LABELS } from "./wizard.js";
export { FloorplanEditor, type Marker, type PlanMeta, type PositionFeed } from "./floorplan.js";
export { PlacementEditor, CATALOG, POSITIONS, POI_FIELDS, suggest, type PaletteEntry, type PlacedAugmenter } from "./palette.js";
export { PreviewPane, type PaneState } from "./preview.js";
export { IdentityForm, ContextTypesForm, SensorsForm, RulesForm, CONTEXT_TYPES, SENSOR_KINDS } from "./forms.js";
export { computeXPath, type ElementLike } from "./xpath.js";
export { t, catalog, LocaleSwitcher, LOCALES, type Locale } from "./i18n.js";
export * from "./types.js";
export { mountWizard } from "./main.js";
