// Live lexical feedback for the profile editor. This is advisory only:
// token shapes and position bounds are checked so typos light up while
// typing, but the service stays the authority on semantics (reference
// bases, duplicates after canonicalization, coverage interactions).

export const GENOME_LENGTH = 16569;

export interface TokenDiagnostic {
  token: string;
  index: number;
  message: string;
}

export interface ParseFeedback {
  valid: boolean;
  variantCount: number;
  errors: TokenDiagnostic[];
}

const SUBSTITUTION = /^(\d+)([ACGT])$/;
const INSERTION = /^(\d+)\.(\d+)([ACGT])$/;
const DELETION = /^(\d+)del$/;

function positionError(position: number): string | null {
  if (position < 1 || position > GENOME_LENGTH) {
    return `position ${position} outside 1-${GENOME_LENGTH}`;
  }
  return null;
}

export function checkToken(token: string): string | null {
  let match = token.match(SUBSTITUTION);
  if (match) {
    return positionError(Number(match[1]));
  }
  match = token.match(INSERTION);
  if (match) {
    const posProblem = positionError(Number(match[1]));
    if (posProblem) return posProblem;
    if (Number(match[2]) < 1) return "insertion index must be >= 1";
    return null;
  }
  match = token.match(DELETION);
  if (match) {
    return positionError(Number(match[1]));
  }
  return "unrecognized token (expected forms: 263G, 315.1C, 523del)";
}

export function checkProfileText(text: string): ParseFeedback {
  const tokens = text.split(/\s+/).filter((t) => t.length > 0);
  const errors: TokenDiagnostic[] = [];
  const seen = new Set<string>();
  tokens.forEach((token, index) => {
    const problem = checkToken(token);
    if (problem) {
      errors.push({ token, index, message: problem });
      return;
    }
    if (seen.has(token)) {
      errors.push({ token, index, message: "duplicate token" });
      return;
    }
    seen.add(token);
  });
  return {
    valid: errors.length === 0,
    variantCount: seen.size,
    errors,
  };
}
