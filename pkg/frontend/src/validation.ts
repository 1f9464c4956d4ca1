/**
 * Client-side mirror of the server's live-checkable validation rules.
 *
 * These are advisory UX hints; the server remains authoritative.  The shared
 * vector file (shared/validation_vectors.json) is run through both sides'
 * test suites, so any drift between this module and the server fails a test.
 */

export const DEFAULT_LEGAL_SYMBOLS = [",", ".", ":", ";", "£", "'", '"'];

const LETTER_OR_DIGIT = /[\p{L}\p{Nd}]/u;

export function isLegalChar(ch: string, symbols: readonly string[]): boolean {
  return LETTER_OR_DIGIT.test(ch) || /\s/u.test(ch) || symbols.includes(ch);
}

export interface IllegalChar {
  ch: string;
  index: number;
}

/** Offending characters with their positions (code-point indexed, like the server). */
export function illegalCharacters(
  text: string,
  symbols: readonly string[] = DEFAULT_LEGAL_SYMBOLS,
): IllegalChar[] {
  const out: IllegalChar[] = [];
  let index = 0;
  for (const ch of text) {
    if (!isLegalChar(ch, symbols)) {
      out.push({ ch, index });
    }
    index += 1;
  }
  return out;
}

/** Character count of the utterance; code points, to match the server. */
export function utteranceLength(text: string): number {
  return [...text].length;
}

export function lengthOk(text: string, required: number): boolean {
  return utteranceLength(text) >= required;
}

function squash(text: string): string {
  return text.split(/\s+/u).filter(Boolean).join(" ").toLowerCase();
}

/** Required verbatim values not found in the text. */
export function missingRequiredElements(
  text: string,
  required: readonly string[],
): string[] {
  const hay = squash(text);
  return required.filter((value) => !hay.includes(squash(value)));
}

export function timingOk(elapsedSeconds: number, minPageSeconds: number): boolean {
  return elapsedSeconds >= minPageSeconds;
}

export interface LiveVerdicts {
  legal_characters: boolean;
  min_length: boolean;
  required_elements: boolean;
  timing: boolean;
}

export function liveVerdicts(
  text: string,
  minLength: number,
  required: readonly string[],
  elapsedSeconds: number,
  minPageSeconds: number,
  symbols: readonly string[] = DEFAULT_LEGAL_SYMBOLS,
): LiveVerdicts {
  return {
    legal_characters: illegalCharacters(text, symbols).length === 0,
    min_length: lengthOk(text, minLength),
    required_elements: missingRequiredElements(text, required).length === 0,
    timing: timingOk(elapsedSeconds, minPageSeconds),
  };
}
