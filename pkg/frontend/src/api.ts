// Typed client for the chat service API. The three endpoints below are the
// whole contract; the UI renders only what they return.

export interface ProvenancePassage {
  id: string;
  text: string;
  score: number;
  rank: number;
}

export interface AskRequest {
  question: string;
  mode: string;
  cutoff: number;
}

export interface AskResponse {
  answer: string;
  answered: boolean;
  passages: ProvenancePassage[];
  mode: string;
  timings: { retrieval_ms: number; generation_ms: number };
}

export interface ModesResponse {
  modes: string[];
  cutoffs: number[];
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
    this.name = "ApiError";
  }
}

async function parseOrThrow<T>(res: Response): Promise<T> {
  if (!res.ok) {
    let detail = `${res.status} ${res.statusText}`;
    try {
      const body = await res.json();
      if (body && typeof body.detail === "string") detail = body.detail;
    } catch {
      // keep the status line
    }
    throw new ApiError(res.status, detail);
  }
  return (await res.json()) as T;
}

export function makeClient(fetchFn: FetchLike = (...a) => globalThis.fetch(...a)) {
  return {
    async modes(): Promise<ModesResponse> {
      return parseOrThrow(await fetchFn("/api/modes"));
    },

    async ask(request: AskRequest): Promise<AskResponse> {
      const res = await fetchFn("/api/ask", {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(request),
      });
      return parseOrThrow(res);
    },
  };
}

export type Client = ReturnType<typeof makeClient>;
