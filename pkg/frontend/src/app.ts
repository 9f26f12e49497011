// DOM wiring. Everything testable lives in the other modules; this file
// maps panel inputs to service calls and renders responses.

import { ApiClient, ApiError } from "./api.js";
import { formatFull, formatLrRounded, formatProbability } from "./format.js";
import { checkProfileText } from "./parse.js";
import { PanelQueue, SessionModel, displayedLr } from "./state.js";
import { isSkipped } from "./types.js";
import type { HistoryEntry } from "./state.js";
import type { LrReport } from "./types.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K, cls?: string, text?: string): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (cls) node.className = cls;
  if (text !== undefined) node.textContent = text;
  return node;
}

function must<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function describeError(error: unknown): string {
  if (error instanceof ApiError) {
    return `${error.code}: ${error.message}`;
  }
  return error instanceof Error ? error.message : String(error);
}

export function initApp(client: ApiClient): void {
  const model = new SessionModel();
  const lrQueue = new PanelQueue();
  const classifyQueue = new PanelQueue();
  const distQueue = new PanelQueue();

  const profileInput = must<HTMLTextAreaElement>("profile-input");
  const parseFeedback = must<HTMLDivElement>("parse-feedback");
  const sourcesBox = must<HTMLDivElement>("sources-box");
  const poolInput = must<HTMLInputElement>("pool-input");
  const policySelect = must<HTMLSelectElement>("policy-select");
  const modeSelect = must<HTMLSelectElement>("mode-select");
  const fallbackInput = must<HTMLInputElement>("fallback-input");
  const overrideInput = must<HTMLInputElement>("override-input");
  const coverageInput = must<HTMLInputElement>("coverage-input");
  const weightsInput = must<HTMLTextAreaElement>("weights-input");
  const distStatus = must<HTMLDivElement>("dist-status");
  const resultBox = must<HTMLDivElement>("result-box");
  const classifyBox = must<HTMLDivElement>("classify-box");
  const historyList = must<HTMLUListElement>("history-list");
  const serviceInfo = must<HTMLDivElement>("service-info");

  function renderParseFeedback(): void {
    const feedback = checkProfileText(profileInput.value);
    parseFeedback.replaceChildren();
    if (profileInput.value.trim() === "") {
      parseFeedback.textContent = "paste an rCRS-relative profile";
      parseFeedback.className = "muted";
      return;
    }
    if (feedback.valid) {
      parseFeedback.textContent =
        `valid, ${feedback.variantCount} variant(s)`;
      parseFeedback.className = "ok";
      return;
    }
    parseFeedback.className = "error";
    for (const diag of feedback.errors) {
      parseFeedback.appendChild(
        el("div", undefined, `${diag.token}: ${diag.message}`));
    }
  }

  function lrCell(report: LrReport): HTMLElement {
    const cell = el("div", "report");
    const headline = el("div", "lr-headline", formatLrRounded(report.lr));
    headline.title = `exact: ${formatFull(report.lr)}`;
    cell.appendChild(headline);
    cell.appendChild(el("div", "muted",
      report.source_names.join("+") + (report.pooled ? " (pooled)" : "")));
    const breakdown = el("div", "breakdown",
      `P(${report.tlhg_used}) ${formatProbability(report.tlhg_prob)} x ` +
      `P(SNV) ${formatProbability(report.snv_prob)} = ` +
      `${formatProbability(report.match_probability)}`);
    breakdown.title = `exact match probability: ` +
      formatFull(report.match_probability);
    cell.appendChild(breakdown);
    const snv = report.chosen_snv
      ? `${report.chosen_snv.position}${report.chosen_snv.alt}`
      : "none";
    cell.appendChild(el("div", undefined,
      `rank ${report.rank_used}, TLHG ${report.tlhg_used}, SNV ${snv}`));
    if (report.fallback_used) {
      cell.appendChild(el("div", "badge-fallback",
        "fallback: no database SNV, P(SNV)=1"));
    }
    for (const [rank, entry] of Object.entries(report.per_rank)) {
      if (isSkipped(entry)) {
        cell.appendChild(el("div", "muted",
          `${rank} ${entry.tlhg}: skipped (${entry.skipped})`));
      }
    }
    return cell;
  }

  function renderHistory(): void {
    historyList.replaceChildren();
    for (const entry of [...model.history].reverse()) {
      const item = el("li");
      const lr = displayedLr(entry.responseText);
      item.appendChild(el("span", undefined,
        `#${entry.id} LR ${lr === null ? "(per-source)" : formatLrRounded(lr)}` +
        ` - ${entry.request.profile.slice(0, 40)}` +
        (entry.request.tlhg_override
          ? ` [override ${entry.request.tlhg_override}]` : "")));
      const rerun = el("button", undefined, "re-run");
      const status = el("span", "muted", "");
      rerun.addEventListener("click", () => {
        void lrQueue.submit(() => model.rerun(entry, client)).then((out) => {
          if (out.stale) return;
          if (out.error) {
            status.textContent = ` ${describeError(out.error)}`;
            status.className = "error";
          } else if (out.value) {
            status.textContent = out.value.identical
              ? " byte-identical" : " response changed";
            status.className = out.value.identical ? "ok" : "warn";
          }
        });
      });
      item.appendChild(rerun);
      item.appendChild(status);
      historyList.appendChild(item);
    }
  }

  function syncModel(): void {
    model.profileText = profileInput.value;
    model.pool = poolInput.checked;
    model.rankPolicy = policySelect.value || undefined;
    model.mode = modeSelect.value || undefined;
    model.allowFallback = fallbackInput.checked;
    model.tlhgOverride = overrideInput.value;
    model.selectedSources = Array.from(
      sourcesBox.querySelectorAll<HTMLInputElement>("input:checked"),
      (box) => box.value);
  }

  must<HTMLButtonElement>("evaluate-btn").addEventListener("click", () => {
    syncModel();
    const request = model.buildLrRequest();
    if (coverageInput.value.trim()) {
      request.coverage = coverageInput.value.trim();
    }
    resultBox.textContent = "querying...";
    void lrQueue.submit(() => client.lr(request)).then((out) => {
      if (out.stale) return;
      if (out.error || !out.value) {
        resultBox.replaceChildren(
          el("div", "error", describeError(out.error)));
        return;
      }
      const entry = model.addHistory(request, out.value.raw);
      const reports = Array.isArray(out.value.body)
        ? out.value.body : [out.value.body];
      resultBox.replaceChildren(...reports.map(lrCell));
      renderHistory();
      void entry;
    });
  });

  must<HTMLButtonElement>("classify-btn").addEventListener("click", () => {
    syncModel();
    classifyBox.textContent = "querying...";
    const payload: { profile: string; coverage?: string; mode?: string } = {
      profile: model.profileText.trim(),
    };
    if (coverageInput.value.trim()) payload.coverage = coverageInput.value;
    if (model.mode) payload.mode = model.mode;
    void classifyQueue.submit(() => client.classify(payload)).then((out) => {
      if (out.stale) return;
      if (out.error || !out.value) {
        classifyBox.replaceChildren(
          el("div", "error", describeError(out.error)));
        return;
      }
      const p = out.value.body;
      classifyBox.textContent =
        `rank1 ${p.rank1} (motif ${p.rank1_motif}), ` +
        `rank2 ${p.rank2} (motif ${p.rank2_motif})`;
    });
  });

  must<HTMLButtonElement>("dist-apply-btn").addEventListener("click", () => {
    const weights: Record<string, number> = {};
    for (const line of weightsInput.value.split("\n")) {
      const parts = line.trim().split(/[\s,]+/);
      if (parts.length === 0 || parts[0] === "") continue;
      if (parts.length !== 2) {
        distStatus.textContent = `bad line: ${line.trim()}`;
        distStatus.className = "error";
        return;
      }
      weights[parts[0] as string] = Number(parts[1]);
    }
    void distQueue.submit(() => client.uploadDistribution(weights))
      .then((out) => {
        if (out.stale) return;
        if (out.error || !out.value) {
          distStatus.textContent = describeError(out.error);
          distStatus.className = "error";
          return;
        }
        model.distributionSession = out.value.body.session;
        const probs = Object.entries(out.value.body.distribution.probs)
          .map(([t, p]) => `${t}=${formatProbability(p)}`).join(" ");
        distStatus.textContent = `applied: ${probs}`;
        distStatus.className = "ok";
      });
  });

  must<HTMLButtonElement>("dist-clear-btn").addEventListener("click", () => {
    model.distributionSession = null;
    distStatus.textContent = "using configured distribution";
    distStatus.className = "muted";
  });

  profileInput.addEventListener("input", renderParseFeedback);
  renderParseFeedback();

  void client.sources().then((result) => {
    const info = result.body;
    serviceInfo.textContent = `service v${info.software_version}`;
    sourcesBox.replaceChildren();
    for (const source of info.sources) {
      const label = el("label");
      const box = el("input");
      box.type = "checkbox";
      box.value = source.name;
      label.appendChild(box);
      label.appendChild(document.createTextNode(
        ` ${source.name} (n=${source.total_n})`));
      sourcesBox.appendChild(label);
    }
  }).catch((error: unknown) => {
    serviceInfo.textContent = describeError(error);
    serviceInfo.className = "error";
  });
}

declare global {
  interface Window {
    MITOLR_BASE_URL?: string;
  }
}

if (typeof document !== "undefined" && document.getElementById("app-root")) {
  initApp(new ApiClient(window.MITOLR_BASE_URL ?? ""));
}

export type { HistoryEntry };
