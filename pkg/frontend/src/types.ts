export interface ParameterSpec {
  id?: string;
  name: string;
  description: string;
  prompt: string;
  extractor?: 'span' | 'arithmetic';
  examples?: string[];
}

export interface AppSpec {
  id?: string;
  name: string;
  description: string;
  examples?: string[];
  parameters: ParameterSpec[];
}

export interface Manifest {
  apps: AppSpec[];
}

export interface SessionState {
  session_id: string;
  current_app: string | null;
  app_states: Record<string, Record<string, string>>;
  version: number;
}

export interface ClassificationSummary {
  app: string;
  score: number;
  confident: boolean;
}

export interface StatePatch {
  CurrentApp: string;
  Config: Record<string, string>;
}

export interface ParseResponse {
  patch: StatePatch;
  classification: ClassificationSummary;
  state: SessionState;
  latency_ms: number;
}

export type ParseResult =
  | { kind: 'ok'; response: ParseResponse }
  | { kind: 'clarification'; classification: ClassificationSummary; detail: string }
  | { kind: 'invalid'; message: string }
  | { kind: 'error'; message: string };

export type ConnectionStatus = 'connecting' | 'live' | 'reconnecting' | 'stopped';
