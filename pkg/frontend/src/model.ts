import type { GatewayApi } from './api.js';
import { openStream, type StreamHandle } from './sse.js';
import type {
  ClassificationSummary,
  ConnectionStatus,
  Manifest,
  SessionState,
} from './types.js';

export interface Snapshot {
  manifest: Manifest | null;
  state: SessionState | null;
  lastClassification: ClassificationSummary | null;
  lastLatencyMs: number | null;
  banner: string | null;
  status: ConnectionStatus;
}

/** Holds everything the page renders. Extracted parameter values live only
 * in the streamed SessionState, never in widget-local state, so a reload
 * that re-subscribes reproduces the identical rendering. */
export class ViewModel {
  private snapshot: Snapshot = {
    manifest: null,
    state: null,
    lastClassification: null,
    lastLatencyMs: null,
    banner: null,
    status: 'connecting',
  };
  private listeners: Array<(snap: Snapshot) => void> = [];
  private stream: StreamHandle | null = null;

  constructor(private client: GatewayApi) {}

  current(): Snapshot {
    return this.snapshot;
  }

  onChange(listener: (snap: Snapshot) => void): void {
    this.listeners.push(listener);
  }

  private update(partial: Partial<Snapshot>): void {
    this.snapshot = { ...this.snapshot, ...partial };
    for (const listener of this.listeners) listener(this.snapshot);
  }

  /** Versions only move forward; stale or duplicate events are dropped. */
  applyState(state: SessionState): void {
    const current = this.snapshot.state;
    if (current !== null && state.version <= current.version) return;
    this.update({ state });
  }

  async init(): Promise<void> {
    const manifest = await this.client.apps();
    this.update({ manifest });
    this.stream = openStream(
      this.client.streamUrl(),
      this.client.streamHeaders(),
      {
        onData: (payload) => {
          try {
            this.applyState(JSON.parse(payload) as SessionState);
          } catch {
            // malformed frame; the next snapshot fetch repairs any gap
          }
        },
        onStatus: (status) => {
          if (status === 'connected') {
            this.update({ status: 'live' });
            // Re-fetch after (re)connect: the stream has no history replay.
            void this.refreshState();
          } else if (this.snapshot.status !== 'stopped') {
            this.update({ status: 'reconnecting' });
          }
        },
      },
    );
    await this.refreshState();
  }

  async refreshState(): Promise<void> {
    try {
      this.applyState(await this.client.state());
    } catch {
      // gateway briefly unavailable; the stream reconnect loop retries
    }
  }

  async submit(text: string): Promise<void> {
    if (!text.trim()) {
      this.update({ banner: 'Type a request first.' });
      return;
    }
    const result = await this.client.parse(text);
    switch (result.kind) {
      case 'ok':
        this.applyState(result.response.state);
        this.update({
          banner: null,
          lastClassification: result.response.classification,
          lastLatencyMs: result.response.latency_ms,
        });
        break;
      case 'clarification':
        this.update({
          banner:
            `Couldn't pull any values out of that. Best guess: ` +
            `${result.classification.app} (score ${result.classification.score.toFixed(2)}). ` +
            `Try rephrasing with concrete details.`,
          lastClassification: result.classification,
        });
        break;
      case 'invalid':
        this.update({ banner: `The gateway rejected that input: ${result.message}` });
        break;
      case 'error':
        this.update({ banner: `Request failed: ${result.message}` });
        break;
    }
  }

  dispose(): void {
    this.stream?.stop();
    this.update({ status: 'stopped' });
  }
}

/** Value shown in one widget: always read straight from session state. */
export function widgetValue(state: SessionState | null, app: string, param: string): string {
  return state?.app_states[app]?.[param] ?? '';
}
