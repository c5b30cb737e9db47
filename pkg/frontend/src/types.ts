// Wire types for the detox service API (mirrors the engine's JSON shapes).

export interface TermMatch {
  term: string;
  score: number;
  token_index: number;
}

export interface SentimentReport {
  sum: number;
  token_count: number;
  bucket: string;
  flagged: boolean;
  matches: TermMatch[];
}

export interface MatchHit {
  term: string;
  source: string;
  start: number;
  end: number;
  excerpt: string;
}

export interface Prediction {
  category: string;
  log_posterior: number;
  runner_up: string;
  margin: number;
}

export interface KeywordTags {
  k: number;
  tags: { token: string; count: number }[];
}

export type DecisionAction = "Keep" | "Annotate" | "Blur" | "Remove" | "Placeholder";

export interface FilterDecision {
  item_id: number;
  action: DecisionAction;
  reason: string;
  domain: string;
  sentiment: SentimentReport;
  hits: MatchHit[];
  category: Prediction | null;
  keywords: KeywordTags | null;
}

export interface RuleHealth {
  category: string;
  container_selector: string;
  matches: number;
}

export interface HealthReport {
  status: "Ok" | "Degraded";
  anchor_count: number;
  rules: RuleHealth[];
}

export interface FilterResponse {
  html: string;
  decisions: FilterDecision[];
  health: HealthReport;
}

export interface PolarityOverride {
  term: string;
  score: number;
}

export interface BlacklistTerm {
  pattern: string;
  is_raw_regex: boolean;
}

export interface Profile {
  sensitivity: number;
  overrides: PolarityOverride[];
  blacklist: BlacklistTerm[];
  blur_enabled: boolean;
  profanity_enabled: boolean;
  disabled_sites: string[];
  version: number;
}

export interface ScanReport {
  site: string;
  warn: boolean;
  hits: MatchHit[];
}

export interface ServiceHealth {
  status: string;
  model_loaded: boolean;
  lexicon_terms: number;
  patterns: string[];
}
