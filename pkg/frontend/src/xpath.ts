/*
 * XPath capture for the extraction assistant.
 *
 * Clicking an element on a page snapshot must yield a path the weaver's
 * XPath dialect accepts: single-quoted attribute literals, positional
 * predicates counted per tag name, steps joined with '/'.  Prefer an id
 * hook (stable across page edits), fall back to a positional chain.
 */

export interface ElementLike {
	tagName: string;
	parentElement: ElementLike | null;
	children: ArrayLike<ElementLike>;
	getAttribute(name: string): string | null;
}

function usableId(el: ElementLike): string | null {
	const id = el.getAttribute("id");
	// the dialect has no quote escaping inside literals
	if (id && !id.includes("'")) return id;
	return null;
}

function positionAmongSameTag(el: ElementLike): number {
	const parent = el.parentElement;
	if (parent === null) return 1;
	let n = 0;
	for (let i = 0; i < parent.children.length; i++) {
		const sib = parent.children[i];
		if (sib === undefined) continue;
		if (sib.tagName === el.tagName) n++;
		if (sib === el) return n;
	}
	return 1;
}

export function computeXPath(el: ElementLike): string {
	const ownId = usableId(el);
	if (ownId !== null) {
		return `//${el.tagName.toLowerCase()}[@id='${ownId}']`;
	}
	const steps: string[] = [];
	let node: ElementLike | null = el;
	while (node !== null) {
		const id = usableId(node);
		if (id !== null && node !== el) {
			steps.unshift(`//${node.tagName.toLowerCase()}[@id='${id}']`);
			return steps.join("/");
		}
		steps.unshift(`${node.tagName.toLowerCase()}[${positionAmongSameTag(node)}]`);
		node = node.parentElement;
	}
	return "/" + steps.join("/");
}
