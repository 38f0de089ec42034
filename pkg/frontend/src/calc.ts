/** Display-side evaluation of extracted calculator expressions.
 *
 * Mirrors the engine's grammar (numbers with optional '$', + - * /,
 * parentheses, usual precedence); returns null when the text is not a
 * complete expression or divides by zero.
 */

type Token = { kind: 'num'; value: number } | { kind: 'op'; value: string };

function lex(text: string): Token[] | null {
  const tokens: Token[] = [];
  const re = /\s*(?:(\d+(?:\.\d+)?)|(\$)|([()+\-*/])|(\S))/g;
  let match: RegExpExecArray | null;
  while ((match = re.exec(text)) !== null) {
    const [, num, dollar, op, junk] = match;
    if (junk !== undefined) return null;
    if (dollar !== undefined) continue;
    if (num !== undefined) tokens.push({ kind: 'num', value: Number(num) });
    else tokens.push({ kind: 'op', value: op! });
  }
  return tokens;
}

class Parser {
  private pos = 0;

  constructor(private tokens: Token[]) {}

  private peek(): Token | undefined {
    return this.tokens[this.pos];
  }

  private takeOp(...symbols: string[]): string | null {
    const token = this.peek();
    if (token?.kind === 'op' && symbols.includes(token.value)) {
      this.pos += 1;
      return token.value;
    }
    return null;
  }

  expr(): number | null {
    let value = this.term();
    if (value === null) return null;
    let op: string | null;
    while ((op = this.takeOp('+', '-')) !== null) {
      const right = this.term();
      if (right === null) return null;
      value = op === '+' ? value + right : value - right;
    }
    return value;
  }

  term(): number | null {
    let value = this.factor();
    if (value === null) return null;
    let op: string | null;
    while ((op = this.takeOp('*', '/')) !== null) {
      const right = this.factor();
      if (right === null) return null;
      if (op === '/') {
        if (right === 0) return null;
        value /= right;
      } else {
        value *= right;
      }
    }
    return value;
  }

  factor(): number | null {
    const token = this.peek();
    if (token === undefined) return null;
    if (token.kind === 'num') {
      this.pos += 1;
      return token.value;
    }
    if (this.takeOp('(') !== null) {
      const inner = this.expr();
      if (inner === null || this.takeOp(')') === null) return null;
      return inner;
    }
    return null;
  }

  done(): boolean {
    return this.pos === this.tokens.length;
  }
}

export function evaluateExpression(text: string): string | null {
  const tokens = lex(text);
  if (tokens === null || tokens.length === 0) return null;
  const parser = new Parser(tokens);
  const value = parser.expr();
  if (value === null || !parser.done() || !Number.isFinite(value)) return null;
  const rendered = Number(value.toPrecision(10)).toString();
  return rendered === '-0' ? '0' : rendered;
}
