/**
 * Conservative HTML sanitizer for html elements in the schema: keeps a
 * small allowlist of formatting tags, drops everything executable.
 */

const ALLOWED_TAGS = new Set([
  "a", "b", "blockquote", "br", "code", "div", "em", "h1", "h2", "h3",
  "h4", "h5", "h6", "hr", "i", "li", "ol", "p", "pre", "small", "span",
  "strong", "sub", "sup", "table", "tbody", "td", "th", "thead", "tr",
  "u", "ul",
]);

const ALLOWED_ATTRS = new Set(["href", "title"]);

function cleanNode(node: Node, doc: Document): Node | null {
  if (node.nodeType === Node.TEXT_NODE) {
    return doc.createTextNode(node.textContent ?? "");
  }
  if (node.nodeType !== Node.ELEMENT_NODE) return null;
  const el = node as Element;
  const tag = el.tagName.toLowerCase();
  if (tag === "script" || tag === "style" || tag === "iframe") return null;
  const children: Node[] = [];
  for (const child of Array.from(el.childNodes)) {
    const cleaned = cleanNode(child, doc);
    if (cleaned) children.push(cleaned);
  }
  if (!ALLOWED_TAGS.has(tag)) {
    // unknown wrapper: keep the readable content, drop the tag
    const frag = doc.createDocumentFragment();
    children.forEach((c) => frag.appendChild(c));
    return frag;
  }
  const out = doc.createElement(tag);
  for (const attr of Array.from(el.attributes)) {
    if (!ALLOWED_ATTRS.has(attr.name.toLowerCase())) continue;
    if (attr.name.toLowerCase() === "href" &&
        attr.value.trim().toLowerCase().startsWith("javascript:")) {
      continue;
    }
    out.setAttribute(attr.name, attr.value);
  }
  children.forEach((c) => out.appendChild(c));
  return out;
}

export function sanitizeHtml(markup: string, doc: Document): DocumentFragment {
  const parsed = new DOMParser().parseFromString(markup, "text/html");
  const frag = doc.createDocumentFragment();
  for (const child of Array.from(parsed.body.childNodes)) {
    const cleaned = cleanNode(child, doc);
    if (cleaned) frag.appendChild(cleaned);
  }
  return frag;
}
