// Wire types mirroring the service's JSON bodies (docs/schemas in the
// repository root). The UI never computes statistics from these beyond
// display rounding.

export interface ChosenSnv {
  position: number;
  alt: string;
}

export interface EvaluatedRank {
  tlhg: string;
  tlhg_prob: number;
  chosen_snv: ChosenSnv | null;
  snv_prob: number;
  match_probability: number;
  lr: number;
  fallback_used: boolean;
}

export interface SkippedRank {
  tlhg: string;
  tlhg_prob: number;
  skipped: string;
}

export type PerRankEntry = EvaluatedRank | SkippedRank;

export function isSkipped(entry: PerRankEntry): entry is SkippedRank {
  return "skipped" in entry;
}

export interface LrReport {
  software_version: string;
  source_names: string[];
  pooled: boolean;
  rank_policy: string;
  classifier_mode: string;
  tlhg_override: string | null;
  rank_used: string;
  tlhg_used: string;
  tlhg_prob: number;
  chosen_snv: ChosenSnv | null;
  snv_prob: number;
  match_probability: number;
  lr: number;
  fallback_used: boolean;
  per_rank: Record<string, PerRankEntry>;
}

export interface TlhgPrediction {
  rank1: string;
  rank2: string;
  rank1_motif: string;
  rank2_motif: string;
  scores: Record<string, number>;
}

export interface DistributionBody {
  source_name: string;
  probs: Record<string, number>;
}

export interface UploadResult {
  session: string;
  distribution: DistributionBody;
}

export interface SourceInfo {
  name: string;
  total_n: number;
  tlhg_count: number;
  record_count: number;
}

export interface SourcesBody {
  software_version: string;
  sources: SourceInfo[];
}

export interface EstimateResult {
  method: string;
  match_probability: number;
  lr: number;
}

export interface ErrorBody {
  error: {
    code: string;
    message: string;
    exit_code: number;
    [extra: string]: unknown;
  };
}

// Request payload for POST /lr; field names match the endpoint contract.
export interface LrRequestBody {
  profile: string;
  coverage?: string;
  mode?: string;
  rank_policy?: string;
  pool?: boolean;
  allow_fallback?: boolean;
  tlhg_override?: string;
  sources?: string[];
  session?: string;
}
