/*
 * UI-side message catalogs.
 *
 * The JSON files under ./locales are byte-for-byte copies of the catalogs
 * the service ships (a test enforces this), so an error key rendered here
 * reads the same as one localized by the server.
 */

import en from "./locales/en.json" with { type: "json" };
import es from "./locales/es.json" with { type: "json" };
import fr from "./locales/fr.json" with { type: "json" };

export type Locale = "en" | "es" | "fr";

export const LOCALES: readonly Locale[] = ["en", "es", "fr"];

const CATALOGS: Record<Locale, Record<string, string>> = { en, es, fr };

export function catalog(locale: Locale): Record<string, string> {
	return CATALOGS[locale];
}

/** Resolve a message key; falls back to English, then to the key itself. */
export function t(key: string, locale: Locale): string {
	return CATALOGS[locale][key] ?? CATALOGS.en[key] ?? key;
}

export class LocaleSwitcher {
	private current: Locale = "en";
	private readonly listeners: Array<(locale: Locale) => void> = [];

	get locale(): Locale {
		return this.current;
	}

	get available(): readonly Locale[] {
		return LOCALES;
	}

	switchTo(locale: Locale): void {
		if (!LOCALES.includes(locale)) throw new Error(`unknown locale ${locale}`);
		if (locale === this.current) return;
		this.current = locale;
		for (const fn of this.listeners) fn(locale);
	}

	onChange(fn: (locale: Locale) => void): void {
		this.listeners.push(fn);
	}

	t(key: string): string {
		return t(key, this.current);
	}
}
