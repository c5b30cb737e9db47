// Rendering of the filtered document: decorates the engine's data-detox
// markers into cards, blur wrappers and emoji annotations. Every piece of
// displayed verdict data is read from a service response field or a
// data-* attribute the engine emitted.

import type { FilterDecision, FilterResponse, MatchHit } from "./types.js";

export const BUCKET_EMOJI: Record<string, string> = {
  StronglyNegative: "\u{1F620}", // angry
  Negative: "\u{1F641}", // slightly frowning
  Neutral: "\u{1F610}", // neutral
  Positive: "\u{1F642}", // slightly smiling
  StronglyPositive: "\u{1F604}", // grinning
};

export function decisionsById(response: FilterResponse): Map<number, FilterDecision> {
  return new Map(response.decisions.map((d) => [d.item_id, d]));
}

function tagList(doc: Document, decision: FilterDecision | undefined): HTMLElement {
  const tags = doc.createElement("div");
  tags.className = "dx-tags";
  const keywords = decision?.keywords?.tags ?? [];
  for (const { token, count } of keywords) {
    const chip = doc.createElement("span");
    chip.className = "dx-tag";
    chip.textContent = count > 1 ? `${token} (${count})` : token;
    tags.appendChild(chip);
  }
  if (keywords.length === 0) {
    const chip = doc.createElement("span");
    chip.className = "dx-tag dx-tag-empty";
    chip.textContent = "no keywords";
    tags.appendChild(chip);
  }
  return tags;
}

export function decoratePlaceholder(
  marker: HTMLElement,
  decision: FilterDecision | undefined,
  onReinstate: (itemId: number) => void,
): void {
  const doc = marker.ownerDocument;
  marker.classList.add("dx-placeholder");
  const domain = marker.getAttribute("data-domain") ?? decision?.domain ?? "";
  const category = marker.getAttribute("data-category");
  const score = marker.getAttribute("data-score");

  const title = doc.createElement("div");
  title.className = "dx-placeholder-title";
  title.textContent = `Filtered result from ${domain}`;
  marker.appendChild(title);

  const meta = doc.createElement("div");
  meta.className = "dx-placeholder-meta";
  meta.textContent = category
    ? `category: ${category} · score ${score}`
    : `score ${score}`;
  marker.appendChild(meta);

  marker.appendChild(tagList(doc, decision));

  const hint = doc.createElement("div");
  hint.className = "dx-placeholder-hint";
  hint.textContent = "click to show the original result";
  marker.appendChild(hint);

  marker.addEventListener("click", () => {
    const itemId = Number(marker.getAttribute("data-item"));
    if (Number.isInteger(itemId)) onReinstate(itemId);
  });
}

export function decorateBlur(marker: HTMLElement): void {
  marker.classList.add("dx-blur"); // CSS unblurs on hover
}

export function decorateRemoved(marker: HTMLElement, decision: FilterDecision | undefined): void {
  marker.classList.add("dx-removed");
  const note = marker.ownerDocument.createElement("div");
  note.className = "dx-removed-note";
  note.textContent = decision
    ? `result from ${decision.domain} removed (${decision.reason.toLowerCase()} match)`
    : "result removed";
  marker.appendChild(note);
}

export function decorateAnnotated(marker: HTMLElement): void {
  const bucket = marker.getAttribute("data-bucket") ?? "Neutral";
  const emoji = marker.ownerDocument.createElement("span");
  emoji.className = "dx-emoji";
  emoji.setAttribute("data-bucket", bucket);
  emoji.textContent = BUCKET_EMOJI[bucket] ?? BUCKET_EMOJI.Neutral;
  emoji.title = bucket;
  marker.prepend(emoji);
}

export function decorateDocument(
  container: HTMLElement,
  response: FilterResponse,
  onReinstate: (itemId: number) => void,
): void {
  const byId = decisionsById(response);
  for (const marker of Array.from(container.querySelectorAll<HTMLElement>("[data-detox]"))) {
    const kind = marker.getAttribute("data-detox");
    const decision = byId.get(Number(marker.getAttribute("data-item")));
    if (kind === "placeholder") decoratePlaceholder(marker, decision, onReinstate);
    else if (kind === "blur") decorateBlur(marker);
    else if (kind === "removed") decorateRemoved(marker, decision);
    else if (kind === "annotated") decorateAnnotated(marker);
  }
}

export function summarize(response: FilterResponse): string {
  const counts: Record<string, number> = {};
  for (const decision of response.decisions) {
    counts[decision.action] = (counts[decision.action] ?? 0) + 1;
  }
  const flagged = counts.Placeholder ?? 0;
  const parts = [
    `flagged ${flagged}`,
    `blurred ${counts.Blur ?? 0}`,
    `removed ${counts.Remove ?? 0}`,
    `kept ${(counts.Keep ?? 0) + (counts.Annotate ?? 0)}`,
  ];
  if (response.health.status === "Degraded") {
    parts.push("health: Degraded (patterns matched nothing)");
  }
  return parts.join(" · ");
}

export function renderScanResult(target: HTMLElement, warn: boolean, hits: MatchHit[]): void {
  const doc = target.ownerDocument;
  target.textContent = "";
  const box = doc.createElement("div");
  box.className = warn ? "dx-scan-warn" : "dx-scan-clear";
  const headline = doc.createElement("div");
  headline.className = "dx-scan-headline";
  headline.textContent = warn
    ? `⚠ ${hits.length} blacklisted ${hits.length === 1 ? "term" : "terms"} detected`
    : "all clear";
  box.appendChild(headline);
  for (const hit of hits) {
    const line = doc.createElement("div");
    line.className = "dx-scan-hit";
    const term = doc.createElement("strong");
    term.textContent = hit.term;
    const excerpt = doc.createElement("span");
    excerpt.className = "dx-scan-excerpt";
    excerpt.textContent = ` …${hit.excerpt}…`;
    line.append(term, excerpt);
    box.appendChild(line);
  }
  target.appendChild(box);
}
