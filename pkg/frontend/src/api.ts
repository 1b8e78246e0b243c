// Thin client for the four backend endpoints. Conversion responses are kept
// as raw text so downloads carry the server's canonical bytes untouched.

import type {
  SlaDocumentJson,
  ValidateResponse,
  Vocabulary,
} from "./types.js";

export class ApiError extends Error {
  readonly code: string;
  readonly path?: string;

  constructor(code: string, message: string, path?: string) {
    super(message);
    this.code = code;
    this.path = path;
  }
}

async function raiseFrom(response: Response): Promise<never> {
  let code = `http-${response.status}`;
  let message = response.statusText;
  let path: string | undefined;
  try {
    const body = await response.json();
    if (body && body.error) {
      code = body.error.code ?? code;
      message = body.error.message ?? message;
      path = body.error.path;
    }
  } catch {
    // non-JSON error body; keep the HTTP status text
  }
  throw new ApiError(code, message, path);
}

export class ApiClient {
  constructor(private readonly base: string = "") {}

  private url(path: string): string {
    return this.base + path;
  }

  async vocabulary(): Promise<Vocabulary> {
    const response = await fetch(this.url("/api/vocabulary"));
    if (!response.ok) await raiseFrom(response);
    return (await response.json()) as Vocabulary;
  }

  async validate(document: SlaDocumentJson): Promise<ValidateResponse> {
    const response = await fetch(this.url("/api/validate"), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(document),
    });
    if (!response.ok) await raiseFrom(response);
    return (await response.json()) as ValidateResponse;
  }

  /** Convert between formats; resolves to the canonical output text. */
  async convert(
    text: string,
    source: "dsl" | "json",
    to: "dsl" | "json",
  ): Promise<string> {
    const response = await fetch(this.url(`/api/convert?to=${to}`), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ text, source }),
    });
    if (!response.ok) await raiseFrom(response);
    return await response.text();
  }

  /** Rank offers against a request; returns the raw report array text. */
  async match(
    request: SlaDocumentJson,
    offers: SlaDocumentJson[],
  ): Promise<string> {
    const response = await fetch(this.url("/api/match"), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ request, offers }),
    });
    if (!response.ok) await raiseFrom(response);
    return await response.text();
  }
}
