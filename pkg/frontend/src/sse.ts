/** Server-sent-events consumption over a streamed fetch.
 *
 * A plain fetch + reader works in every runtime with WHATWG streams
 * (browsers and node), unlike EventSource, and lets us attach the session
 * header. The connection auto-reconnects with a fixed delay; callers
 * re-fetch a snapshot on each (re)connect to stay gap-free.
 */

export interface SseParser {
  buffer: string;
}

export function newSseParser(): SseParser {
  return { buffer: '' };
}

/** Feed one transport chunk; returns the data payloads of any frames that
 * completed. Comment frames (leading ':') are dropped. */
export function feedSseChunk(parser: SseParser, chunk: string): string[] {
  parser.buffer += chunk.replace(/\r\n/g, '\n');
  const events: string[] = [];
  let cut: number;
  while ((cut = parser.buffer.indexOf('\n\n')) !== -1) {
    const frame = parser.buffer.slice(0, cut);
    parser.buffer = parser.buffer.slice(cut + 2);
    const dataLines = frame
      .split('\n')
      .filter((line) => line.startsWith('data:'))
      .map((line) => (line.startsWith('data: ') ? line.slice(6) : line.slice(5)));
    if (dataLines.length > 0) {
      events.push(dataLines.join('\n'));
    }
  }
  return events;
}

export interface StreamHandlers {
  onData(payload: string): void;
  onStatus?(status: 'connected' | 'disconnected'): void;
}

export interface StreamHandle {
  stop(): void;
}

export function openStream(
  url: string,
  headers: Record<string, string>,
  handlers: StreamHandlers,
  retryMs = 1000,
): StreamHandle {
  let active = true;
  let controller = new AbortController();

  const sleep = (ms: number) => new Promise((resolve) => setTimeout(resolve, ms));

  (async () => {
    while (active) {
      try {
        controller = new AbortController();
        const response = await fetch(url, {
          headers: { Accept: 'text/event-stream', ...headers },
          signal: controller.signal,
        });
        if (!response.ok || !response.body) {
          throw new Error(`stream responded ${response.status}`);
        }
        handlers.onStatus?.('connected');
        const reader = response.body.getReader();
        const decoder = new TextDecoder();
        const parser = newSseParser();
        for (;;) {
          const { done, value } = await reader.read();
          if (done) break;
          for (const payload of feedSseChunk(parser, decoder.decode(value, { stream: true }))) {
            handlers.onData(payload);
          }
        }
      } catch {
        // fall through to reconnect
      }
      if (!active) return;
      handlers.onStatus?.('disconnected');
      await sleep(retryMs);
    }
  })();

  return {
    stop() {
      active = false;
      controller.abort();
    },
  };
}
