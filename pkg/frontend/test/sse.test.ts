import { describe, expect, it } from 'vitest';

import { feedSseChunk, newSseParser } from '../src/sse.js';

describe('feedSseChunk', () => {
  it('emits one payload per complete frame', () => {
    const parser = newSseParser();
    const events = feedSseChunk(parser, 'data: {"version": 1}\n\ndata: {"version": 2}\n\n');
    expect(events).toEqual(['{"version": 1}', '{"version": 2}']);
  });

  it('holds partial frames until the terminator arrives', () => {
    const parser = newSseParser();
    expect(feedSseChunk(parser, 'data: {"ver')).toEqual([]);
    expect(feedSseChunk(parser, 'sion": 3}')).toEqual([]);
    expect(feedSseChunk(parser, '\n\n')).toEqual(['{"version": 3}']);
  });

  it('drops comment keep-alive frames', () => {
    const parser = newSseParser();
    expect(feedSseChunk(parser, ': keep-alive\n\n')).toEqual([]);
    expect(feedSseChunk(parser, ': ping\n\ndata: x\n\n')).toEqual(['x']);
  });

  it('handles crlf delimiters', () => {
    const parser = newSseParser();
    expect(feedSseChunk(parser, 'data: y\r\n\r\n')).toEqual(['y']);
  });

  it('joins multi-line data fields', () => {
    const parser = newSseParser();
    expect(feedSseChunk(parser, 'data: a\ndata: b\n\n')).toEqual(['a\nb']);
  });

  it('accepts data without a space after the colon', () => {
    const parser = newSseParser();
    expect(feedSseChunk(parser, 'data:z\n\n')).toEqual(['z']);
  });

  it('survives byte-by-byte delivery', () => {
    const parser = newSseParser();
    const frame = 'data: {"version": 9}\n\n';
    const events: string[] = [];
    for (const ch of frame) events.push(...feedSseChunk(parser, ch));
    expect(events).toEqual(['{"version": 9}']);
  });
});
