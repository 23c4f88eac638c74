// Thin typed client for the discovery session API. All numbers shown in the
// UI come from these responses; the client never recomputes anything.

export interface DatasetInfo {
  name: string;
  attributes: string[];
}

export interface CreateSessionResponse {
  session_id: string;
  datasets: DatasetInfo[];
  tuple_count: number;
  max_rounds: number;
}

export interface HistoryEntry {
  round_index: number;
  choices: Record<string, string>;
  pivot: number;
  y_min: number;
  y_max: number;
  survivors: number[];
}

export interface SurvivorRow {
  tuple_id: number;
  values: number[];
  utility: number;
}

export interface PendingDataset {
  name: string;
  attributes: string[];
}

export interface SessionView {
  status: 'AwaitingRanking' | 'Finished';
  round: number;
  max_rounds: number;
  tuple_count: number;
  alive_count: number;
  columns: string[];
  pending_datasets: PendingDataset[];
  survivor_preview: SurvivorRow[];
  history: HistoryEntry[];
}

export interface FinishResponse {
  tuples: number[];
  utilities: number[];
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
  }
}

async function handle<T>(response: Response): Promise<T> {
  if (response.ok) {
    return (await response.json()) as T;
  }
  let code = 'http_error';
  let message = `request failed (${response.status})`;
  try {
    const body = await response.json();
    if (body?.error) {
      code = body.error.code ?? code;
      message = body.error.message ?? message;
    }
  } catch {
    // non-JSON error body; keep the generic message
  }
  throw new ApiError(response.status, code, message);
}

export async function createSession(files: File[]): Promise<CreateSessionResponse> {
  const form = new FormData();
  for (const file of files) {
    form.append('files', file, file.name);
  }
  return handle(await fetch('/api/sessions', { method: 'POST', body: form }));
}

export async function getSession(sessionId: string): Promise<SessionView> {
  return handle(await fetch(`/api/sessions/${sessionId}`));
}

export async function submitRound(
  sessionId: string,
  choices: Record<string, string>,
): Promise<unknown> {
  return handle(
    await fetch(`/api/sessions/${sessionId}/rounds`, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify({ choices }),
    }),
  );
}

export async function finishSession(sessionId: string): Promise<FinishResponse> {
  return handle(await fetch(`/api/sessions/${sessionId}/finish`, { method: 'POST' }));
}

export async function exportCsv(sessionId: string): Promise<string> {
  const response = await fetch(`/api/sessions/${sessionId}/export`);
  if (!response.ok) {
    throw new ApiError(response.status, 'export_failed', 'export failed');
  }
  return response.text();
}
