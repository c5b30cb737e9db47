// Profile draft model and client-side validation mirroring the engine's
// ranges. Validation runs before every PUT; an invalid draft never leaves
// the browser.

import type { Profile } from "./types.js";

export interface DraftOverride {
  term: string;
  score: string; // raw input, validated on save
}

export interface ProfileDraft {
  sensitivity: string;
  overrides: DraftOverride[];
  blacklist: string[];
  blur_enabled: boolean;
  profanity_enabled: boolean;
  disabled_sites: string[];
  version: number;
}

export function draftFromProfile(profile: Profile): ProfileDraft {
  return {
    sensitivity: String(profile.sensitivity),
    overrides: profile.overrides.map((o) => ({ term: o.term, score: String(o.score) })),
    blacklist: profile.blacklist.map((t) => t.pattern),
    blur_enabled: profile.blur_enabled,
    profanity_enabled: profile.profanity_enabled,
    disabled_sites: [...profile.disabled_sites],
    version: profile.version,
  };
}

function intInRange(raw: string, low: number, high: number): number | null {
  if (!/^-?\d+$/.test(raw.trim())) return null;
  const value = Number(raw.trim());
  return value >= low && value <= high ? value : null;
}

export interface DraftValidation {
  errors: string[];
  profile: Profile | null;
}

export function validateDraft(draft: ProfileDraft): DraftValidation {
  const errors: string[] = [];

  const sensitivity = intInRange(draft.sensitivity, -5, 5);
  if (sensitivity === null) errors.push("sensitivity must be an integer in [-5, 5]");

  const overrides = [];
  for (const entry of draft.overrides) {
    const term = entry.term.trim().toLowerCase();
    const score = intInRange(entry.score, -5, 5);
    if (!term) errors.push("override terms must be non-empty");
    if (score === null) errors.push(`override score for "${entry.term}" must be in [-5, 5]`);
    if (term && score !== null) overrides.push({ term, score });
  }

  const blacklist = [];
  for (const pattern of draft.blacklist) {
    if (!pattern.trim()) errors.push("blacklist terms must be non-empty");
    else blacklist.push({ pattern: pattern.trim(), is_raw_regex: false });
  }

  const disabled = [];
  for (const site of draft.disabled_sites) {
    if (!site.trim()) errors.push("disabled sites must be non-empty");
    else disabled.push(site.trim().toLowerCase());
  }

  if (errors.length > 0) return { errors, profile: null };
  return {
    errors,
    profile: {
      sensitivity: sensitivity as number,
      overrides,
      blacklist,
      blur_enabled: draft.blur_enabled,
      profanity_enabled: draft.profanity_enabled,
      disabled_sites: disabled,
      version: draft.version,
    },
  };
}
