/** Payload types mirroring the review-service JSON contracts. */

export type LabelValue = 'green' | 'yellow' | 'red';
export type StatusValue =
  | 'auto_certified'
  | 'pending_review'
  | 'certified_human'
  | 'rejected';
export type VerdictValue = 'consistent' | 'suspicious' | 'irrelevant';
export type ReviewActionValue = 'approve_unchanged' | 'approve_with_edits' | 'reject';

export interface TaxonomyLevel {
  framework: 'bloom' | 'solo';
  name: string;
  rank: number;
}

export interface RecordSummary {
  id: string;
  topic: string;
  label: LabelValue;
  status: StatusValue;
  confidence: number;
  flag_count: number;
  created_at: string;
  version: number;
}

export interface QueuePage {
  items: RecordSummary[];
  page: number;
  page_size: number;
  total: number;
  pages: number;
}

export interface AttributionMap {
  tokens: [string, number][];
  predicted_level: TaxonomyLevel;
  lexicon_mass_ratio: number;
  verdict: VerdictValue;
}

export interface CriterionResult {
  satisfied: boolean;
  weight: number;
}

export interface CompletenessReport {
  score: number;
  complete: boolean;
  components: Record<string, CriterionResult>;
  detected_level_mentions: string[];
}

export interface Alignment {
  predicted_level: TaxonomyLevel;
  confidence: number;
  level_scores: Record<string, number>;
  attribution: AttributionMap;
  rationale_report: CompletenessReport;
  agreement: boolean;
  verifier_id: string;
  verifier_version: string;
}

export interface BiasFlag {
  matched_term: string;
  category: string;
  severity: 'minor' | 'major';
  span: [number, number];
  location: string;
}

export interface Governance {
  flags: BiasFlag[];
  privacy_notes: string;
  risk_level: 'none' | 'minor' | 'major';
}

export interface Provenance {
  model_id: string;
  model_version: string;
  prompt_hash: string;
  prompt_text: string | null;
  system_instructions_hash: string;
  generated_at: string;
  generation_params: Record<string, unknown>;
  course_context: string;
}

export interface Item {
  id: string;
  stem: string;
  options: string[];
  correct_index: number;
  declared_level: TaxonomyLevel;
  rationale: string;
  topic: string;
  course_context: string;
  language_code: string;
}

export interface CertificationRecord {
  schema_version: string;
  item: Item;
  provenance: Provenance;
  alignment: Alignment;
  governance: Governance;
  review: unknown | null;
  label: LabelValue;
  status: StatusValue;
  decision_trace: string[];
  version: number;
}

export interface ItemPackage {
  record: CertificationRecord;
  reviewable: boolean;
  rule_catalogue: Record<string, string>;
}

export interface DecisionBody {
  action: ReviewActionValue;
  reviewer_pseudonym: string;
  expected_version: number;
  notes: string;
  edits?: Record<string, unknown> | null;
}

export interface SummaryReport {
  triage_counts: Record<LabelValue, number>;
  level_distribution: Record<string, number>;
  rejection_reasons: Record<string, number>;
  review_summary: Record<ReviewActionValue, number>;
  total_records: number;
}
