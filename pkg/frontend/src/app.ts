// Single-page flow: upload CSVs, rank one attribute per dataset each round,
// watch the survivor set shrink, stop/export whenever satisfied. Every number
// rendered is taken verbatim from the server; the page holds no algorithm
// logic of its own.

import {
  ApiError,
  SessionView,
  createSession,
  exportCsv,
  finishSession,
  getSession,
  submitRound,
} from './api.js';

const PAGE_SIZE = 50;

export class App {
  sessionId: string | null = null;
  view: SessionView | null = null;
  selection: Record<string, string> = {};
  requestPending = false;
  error: string | null = null;
  page = 0;
  lastExportCsv: string | null = null;

  constructor(private root: HTMLElement) {}

  async boot(): Promise<void> {
    const fromHash = window.location.hash.replace(/^#/, '');
    if (fromHash) {
      try {
        this.view = await getSession(fromHash);
        this.sessionId = fromHash;
      } catch {
        window.location.hash = '';
      }
    }
    this.render();
  }

  async upload(files: File[]): Promise<void> {
    this.error = null;
    if (files.length === 0) {
      this.error = 'select at least one CSV file';
      this.render();
      return;
    }
    try {
      const created = await createSession(files);
      this.sessionId = created.session_id;
      window.location.hash = created.session_id;
      this.view = await getSession(created.session_id);
      this.selection = {};
    } catch (err) {
      this.error = err instanceof ApiError ? err.message : `network error: ${err}`;
    }
    this.render();
  }

  selectChip(dataset: string, attribute: string): void {
    this.selection[dataset] = attribute;
    this.render();
  }

  selectionComplete(): boolean {
    if (!this.view) return false;
    return this.view.pending_datasets.every((d) => this.selection[d.name]);
  }

  async submitSelection(): Promise<void> {
    if (!this.sessionId || !this.selectionComplete() || this.requestPending) return;
    this.requestPending = true;
    this.error = null;
    this.render();
    try {
      await submitRound(this.sessionId, this.selection);
      this.view = await getSession(this.sessionId);
      this.selection = {};
      this.page = 0;
    } catch (err) {
      this.error = err instanceof ApiError ? err.message : `network error: ${err}`;
    }
    this.requestPending = false;
    this.render();
  }

  async stopAndExport(): Promise<void> {
    if (!this.sessionId) return;
    this.error = null;
    try {
      await finishSession(this.sessionId);
      this.view = await getSession(this.sessionId);
      const csv = await exportCsv(this.sessionId);
      this.lastExportCsv = csv;
      this.offerDownload(csv);
    } catch (err) {
      this.error = err instanceof ApiError ? err.message : `network error: ${err}`;
    }
    this.render();
  }

  private offerDownload(csv: string): void {
    const blob = new Blob([csv], { type: 'text/csv' });
    const anchor = document.createElement('a');
    anchor.href = URL.createObjectURL(blob);
    anchor.download = 'discovery.csv';
    anchor.click();
    URL.revokeObjectURL(anchor.href);
  }

  render(): void {
    this.root.replaceChildren();
    if (this.error) {
      const banner = el('div', 'error-banner', this.error);
      const dismiss = el('button', 'dismiss', 'dismiss');
      dismiss.addEventListener('click', () => {
        this.error = null;
        this.render();
      });
      banner.appendChild(dismiss);
      this.root.appendChild(banner);
    }
    if (!this.view) {
      this.renderUpload();
    } else {
      this.renderSession(this.view);
    }
  }

  private renderUpload(): void {
    const screen = el('div', 'upload-screen');
    screen.appendChild(el('h1', '', 'Data discovery'));
    screen.appendChild(
      el('p', '', 'Upload one CSV per dataset (shared row order, header of attribute names).'),
    );
    const input = el('input', '') as HTMLInputElement;
    input.type = 'file';
    input.multiple = true;
    input.id = 'file-input';
    input.accept = '.csv,text/csv';
    const button = el('button', '', 'Create session') as HTMLButtonElement;
    button.id = 'upload-btn';
    button.addEventListener('click', () => {
      void this.upload(Array.from(input.files ?? []));
    });
    screen.append(input, button);
    this.root.appendChild(screen);
  }

  private renderSession(view: SessionView): void {
    const screen = el('div', 'session-screen');
    screen.appendChild(
      el(
        'p',
        'session-status',
        `round ${view.round} of up to ${view.max_rounds} — ` +
          `${view.alive_count} of ${view.tuple_count} tuples alive — ${view.status}`,
      ),
    );
    this.renderHistory(screen, view);
    if (view.status === 'AwaitingRanking') {
      this.renderRankingCards(screen, view);
    } else {
      screen.appendChild(el('p', 'finished-note', 'Session finished.'));
    }
    this.renderSurvivors(screen, view);

    const stop = el(
      'button',
      '',
      view.status === 'AwaitingRanking' ? 'Stop & export CSV' : 'Export CSV',
    ) as HTMLButtonElement;
    stop.id = 'stop-btn';
    stop.addEventListener('click', () => void this.stopAndExport());
    screen.appendChild(stop);
    this.root.appendChild(screen);
  }

  private renderHistory(screen: HTMLElement, view: SessionView): void {
    if (view.history.length === 0) return;
    const list = el('ul', 'history');
    for (const entry of view.history) {
      list.appendChild(
        el(
          'li',
          'history-entry',
          `round ${entry.round_index}: y_min=${entry.y_min.toFixed(6)} ` +
            `y_max=${entry.y_max.toFixed(6)} survivors=${entry.survivors.length}`,
        ),
      );
    }
    screen.appendChild(list);
    // Shrinking-survivor sparkline: one bar per round.
    const spark = el('div', 'sparkline');
    const start = view.tuple_count;
    for (const entry of view.history) {
      const bar = el('span', 'spark-bar');
      bar.style.height = `${Math.max(2, (entry.survivors.length / start) * 24)}px`;
      bar.title = `${entry.survivors.length}`;
      spark.appendChild(bar);
    }
    screen.appendChild(spark);
  }

  private renderRankingCards(screen: HTMLElement, view: SessionView): void {
    const cards = el('div', 'dataset-cards');
    const pendingNames = new Set(view.pending_datasets.map((d) => d.name));
    const byDataset = new Map<string, { attr: string; pending: boolean }[]>();
    for (const qualified of view.columns) {
      const dot = qualified.indexOf('.');
      const dataset = qualified.slice(0, dot);
      const attr = qualified.slice(dot + 1);
      const pending = view.pending_datasets.some(
        (d) => d.name === dataset && d.attributes.includes(attr),
      );
      const entry = byDataset.get(dataset) ?? [];
      entry.push({ attr, pending });
      byDataset.set(dataset, entry);
    }
    for (const [dataset, attrs] of byDataset) {
      const card = el('div', 'dataset-card');
      card.dataset.dataset = dataset;
      card.appendChild(el('h2', '', dataset));
      for (const { attr, pending } of attrs) {
        const chip = el('button', 'chip', attr) as HTMLButtonElement;
        chip.dataset.dataset = dataset;
        chip.dataset.attr = attr;
        chip.disabled = !pending || !pendingNames.has(dataset);
        if (this.selection[dataset] === attr) chip.classList.add('selected');
        chip.addEventListener('click', () => this.selectChip(dataset, attr));
        card.appendChild(chip);
      }
      cards.appendChild(card);
    }
    screen.appendChild(cards);

    const submit = el('button', '', 'Submit ranking') as HTMLButtonElement;
    submit.id = 'submit-round';
    submit.disabled = !this.selectionComplete() || this.requestPending;
    submit.addEventListener('click', () => void this.submitSelection());
    screen.appendChild(submit);
  }

  private renderSurvivors(screen: HTMLElement, view: SessionView): void {
    const table = el('table', '') as HTMLTableElement;
    table.id = 'survivor-table';
    const head = el('tr', '');
    head.appendChild(el('th', '', 'tuple'));
    for (const column of view.columns) head.appendChild(el('th', '', column));
    head.appendChild(el('th', '', 'utility'));
    table.appendChild(head);

    const rows = view.survivor_preview;
    const start = this.page * PAGE_SIZE;
    for (const row of rows.slice(start, start + PAGE_SIZE)) {
      const tr = el('tr', 'survivor-row');
      tr.dataset.tupleId = String(row.tuple_id);
      tr.appendChild(el('td', '', String(row.tuple_id)));
      for (const value of row.values) tr.appendChild(el('td', '', String(value)));
      tr.appendChild(el('td', '', row.utility.toFixed(6)));
      table.appendChild(tr);
    }
    screen.appendChild(table);
    if (view.alive_count > rows.length) {
      screen.appendChild(
        el('p', 'preview-note', `showing top ${rows.length} of ${view.alive_count}; export for the full set`),
      );
    }
  }
}

function el(tag: string, className: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function mountApp(root: HTMLElement): App {
  const app = new App(root);
  void app.boot();
  return app;
}
