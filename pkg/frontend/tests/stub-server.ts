// In-memory replacement for the session API, replaying the six-house worked
// example with the exact values the real backend produces. Installed as a
// global fetch stub so the page under test talks to it verbatim.

const COLUMNS = [
  'location.Near Urban',
  'location.Criminal Free',
  'policies.Tax',
  'home_values.Size',
  'home_values.Age',
];

const RAW: Record<number, number[]> = {
  0: [26, 5, 90, 1500, 150],
  1: [35, 2, 20, 1300, 120],
  2: [45, 3, 78, 2000, 95],
  3: [9, 2, 46, 1700, 50],
  4: [6, 4, 65, 1800, 25],
  5: [47, 7, 30, 1450, 75],
};

const UTILITY: Record<number, number> = {
  0: 4.017477203647417,
  1: 2.702617359000338,
  2: 3.886018237082067,
  3: 2.171648091860858,
  4: 2.487977034785545,
  5: 3.5583333333333336,
};

const ROUND_1 = {
  round_index: 1,
  choices: { location: 'Near Urban', policies: 'Tax', home_values: 'Size' },
  pivot: 2,
  y_min: 2.824113475177305,
  y_max: 3.886018237082067,
  survivors: [2, 5],
};

const ROUND_2 = {
  round_index: 2,
  choices: { location: 'Criminal Free', home_values: 'Age' },
  pivot: 2,
  y_min: 3.886018237082067,
  y_max: 3.886018237082067,
  survivors: [2],
};

const PENDING_BY_ROUND: Record<number, { name: string; attributes: string[] }[]> = {
  0: [
    { name: 'location', attributes: ['Near Urban', 'Criminal Free'] },
    { name: 'policies', attributes: ['Tax'] },
    { name: 'home_values', attributes: ['Size', 'Age'] },
  ],
  1: [
    { name: 'location', attributes: ['Criminal Free'] },
    { name: 'home_values', attributes: ['Age'] },
  ],
  2: [],
};

const ALIVE_BY_ROUND: Record<number, number[]> = {
  0: [0, 2, 5, 1, 4, 3], // utility-descending
  1: [2, 5],
  2: [2],
};

export interface StubState {
  created: boolean;
  round: number;
  finished: boolean;
  uploadedNames: string[];
  exportCount: number;
}

function preview(round: number) {
  return ALIVE_BY_ROUND[round].map((tupleId) => ({
    tuple_id: tupleId,
    values: RAW[tupleId],
    utility: UTILITY[tupleId],
  }));
}

function sessionView(state: StubState) {
  return {
    status: state.finished || state.round === 2 ? 'Finished' : 'AwaitingRanking',
    round: state.round,
    max_rounds: 2,
    tuple_count: 6,
    alive_count: ALIVE_BY_ROUND[state.round].length,
    columns: COLUMNS,
    pending_datasets: state.finished ? [] : PENDING_BY_ROUND[state.round],
    survivor_preview: preview(state.round),
    history: [ROUND_1, ROUND_2].slice(0, state.round),
  };
}

function exportCsvBody(state: StubState): string {
  const header = `tuple_id,${COLUMNS.join(',')},utility`;
  const rows = ALIVE_BY_ROUND[state.round].map(
    (tupleId) =>
      `${tupleId},${RAW[tupleId].join(',')},${UTILITY[tupleId].toFixed(6)}`,
  );
  return [header, ...rows].join('\n') + '\n';
}

function json(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { 'content-type': 'application/json' },
  });
}

export function installStubApi(): StubState {
  const state: StubState = {
    created: false,
    round: 0,
    finished: false,
    uploadedNames: [],
    exportCount: 0,
  };

  globalThis.fetch = async (
    input: RequestInfo | URL,
    init?: RequestInit,
  ): Promise<Response> => {
    const url = String(input);
    const method = init?.method ?? 'GET';

    if (url === '/api/sessions' && method === 'POST') {
      const form = init?.body as FormData;
      state.uploadedNames = Array.from(form.getAll('files')).map((f) =>
        (f as File).name.replace(/\.csv$/, ''),
      );
      if (state.uploadedNames.length === 0) {
        return json({ error: { code: 'empty_input', message: 'no datasets' } }, 400);
      }
      state.created = true;
      return json(
        {
          session_id: 's1',
          datasets: PENDING_BY_ROUND[0].map((d) => ({
            name: d.name,
            attributes: d.attributes,
          })),
          tuple_count: 6,
          max_rounds: 2,
        },
        201,
      );
    }
    if (!state.created || !url.startsWith('/api/sessions/s1')) {
      return json({ error: { code: 'unknown_session', message: 'unknown session' } }, 404);
    }
    if (url === '/api/sessions/s1/rounds' && method === 'POST') {
      if (state.finished || state.round >= 2) {
        return json(
          { error: { code: 'session_finished', message: 'session is finished' } },
          409,
        );
      }
      state.round += 1;
      const result = state.round === 1 ? ROUND_1 : ROUND_2;
      return json({
        ...result,
        status: state.round === 2 ? 'Finished' : 'AwaitingRanking',
        eliminated_count: state.round === 1 ? 4 : 1,
        survivor_preview: preview(state.round),
      });
    }
    if (url === '/api/sessions/s1/finish' && method === 'POST') {
      state.finished = true;
      return json({
        tuples: ALIVE_BY_ROUND[state.round],
        utilities: ALIVE_BY_ROUND[state.round].map((tupleId) => UTILITY[tupleId]),
      });
    }
    if (url === '/api/sessions/s1/export') {
      state.exportCount += 1;
      return new Response(exportCsvBody(state), {
        status: 200,
        headers: { 'content-type': 'text/csv' },
      });
    }
    if (url === '/api/sessions/s1' && method === 'GET') {
      return json(sessionView(state));
    }
    return json({ error: { code: 'not_found', message: `no route ${url}` } }, 404);
  };

  return state;
}
