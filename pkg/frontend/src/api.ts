import type { Manifest, ParseResult, SessionState } from './types.js';

const SESSION_HEADER = 'X-Session';

/** What the view model needs from the gateway; GatewayClient is the real
 * implementation, tests substitute stubs. */
export interface GatewayApi {
  apps(): Promise<Manifest>;
  state(): Promise<SessionState>;
  parse(text: string): Promise<ParseResult>;
  streamUrl(): string;
  streamHeaders(): Record<string, string>;
}

export class GatewayClient implements GatewayApi {
  constructor(
    readonly baseUrl: string,
    readonly sessionId: string,
  ) {}

  private headers(): Record<string, string> {
    return { [SESSION_HEADER]: this.sessionId };
  }

  streamUrl(): string {
    return `${this.baseUrl}/v1/state/stream`;
  }

  streamHeaders(): Record<string, string> {
    return this.headers();
  }

  async apps(): Promise<Manifest> {
    const response = await fetch(`${this.baseUrl}/v1/apps`, { headers: this.headers() });
    if (!response.ok) throw new Error(`manifest fetch failed: ${response.status}`);
    return (await response.json()) as Manifest;
  }

  async state(): Promise<SessionState> {
    const response = await fetch(`${this.baseUrl}/v1/state`, { headers: this.headers() });
    if (!response.ok) throw new Error(`state fetch failed: ${response.status}`);
    return (await response.json()) as SessionState;
  }

  async parse(text: string): Promise<ParseResult> {
    let response: Response;
    try {
      response = await fetch(`${this.baseUrl}/v1/parse`, {
        method: 'POST',
        headers: { 'Content-Type': 'application/json', ...this.headers() },
        body: JSON.stringify({ text }),
      });
    } catch (error) {
      return { kind: 'error', message: `network failure: ${String(error)}` };
    }
    if (response.status === 200) {
      return { kind: 'ok', response: await response.json() };
    }
    const body = await response.json().catch(() => ({}));
    if (response.status === 422) {
      return {
        kind: 'clarification',
        classification: body.classification,
        detail: body.detail ?? body.error ?? 'no parameters found',
      };
    }
    if (response.status === 400) {
      return { kind: 'invalid', message: body.error ?? 'invalid input' };
    }
    return { kind: 'error', message: body.error ?? `server error ${response.status}` };
  }
}
