import { describe, expect, it } from 'vitest';

import { evaluateExpression } from '../src/calc.js';

describe('evaluateExpression', () => {
  it('evaluates the extracted calculator forms', () => {
    expect(evaluateExpression('24 / 6')).toBe('4');
    expect(evaluateExpression('24/6')).toBe('4');
    expect(evaluateExpression('$50 - $25')).toBe('25');
    expect(evaluateExpression('12 + 7')).toBe('19');
  });

  it('applies the usual precedence', () => {
    expect(evaluateExpression('2 + 3 * 4')).toBe('14');
    expect(evaluateExpression('(2 + 3) * 4')).toBe('20');
    expect(evaluateExpression('20 - 6 - 4')).toBe('10');
  });

  it('keeps decimals tidy', () => {
    expect(evaluateExpression('0.1 + 0.2')).toBe('0.3');
    expect(evaluateExpression('1 / 3')).toBe('0.3333333333');
  });

  it('returns null for incomplete or invalid text', () => {
    expect(evaluateExpression('')).toBeNull();
    expect(evaluateExpression('24 /')).toBeNull();
    expect(evaluateExpression('abc')).toBeNull();
    expect(evaluateExpression('1 / 0')).toBeNull();
    expect(evaluateExpression('(1 + 2')).toBeNull();
    expect(evaluateExpression('1 2')).toBeNull();
  });
});
