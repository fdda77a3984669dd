import {
  AnalyzeResponse,
  ApiClient,
  ApiError,
  DocumentSource,
  GenerateResponse,
} from "./api.js";
import { renderDiff } from "./diff.js";

export const ZERO_LINKS_BANNER = "No links could be generated.";

export interface AppHandle {
  root: HTMLElement;
  /** Resolves once no request is in flight; lets tests await a click. */
  idle(): Promise<void>;
}

type TabName = "paste" | "file" | "url";

const TABS: Array<{ name: TabName; label: string }> = [
  { name: "paste", label: "Paste" },
  { name: "file", label: "File" },
  { name: "url", label: "URL" },
];

export function createApp(root: HTMLElement, api: ApiClient): AppHandle {
  const doc = root.ownerDocument;

  const el = <K extends keyof HTMLElementTagNameMap>(
    tag: K,
    attrs: Record<string, string> = {},
    text?: string,
  ): HTMLElementTagNameMap[K] => {
    const node = doc.createElement(tag);
    for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
    if (text !== undefined) node.textContent = text;
    return node;
  };

  // --- input panel -------------------------------------------------------
  root.appendChild(el("h1", {}, "OpenAPI Link Generator"));
  root.appendChild(
    el(
      "p",
      { class: "tagline" },
      "Derive link definitions from the path hierarchy and matching parameters of an OpenAPI or Swagger document.",
    ),
  );

  const inputPanel = el("section", { class: "input-panel" });
  const tabBar = el("div", { class: "tabs", role: "tablist" });
  const tabButtons = new Map<TabName, HTMLButtonElement>();
  for (const { name, label } of TABS) {
    const button = el("button", {
      type: "button",
      class: "tab",
      id: `tab-${name}`,
      role: "tab",
      "data-tab": name,
    });
    button.textContent = label;
    tabButtons.set(name, button);
    tabBar.appendChild(button);
  }
  inputPanel.appendChild(tabBar);

  const pasteInput = el("textarea", {
    id: "paste-input",
    rows: "14",
    placeholder: "Paste an OpenAPI or Swagger document (JSON or YAML)",
  });
  const fileInput = el("input", {
    id: "file-input",
    type: "file",
    accept: ".json,.yaml,.yml,application/json,application/yaml",
  });
  const urlInput = el("input", {
    id: "url-input",
    type: "text",
    placeholder: "https://example.com/openapi.yaml",
  });

  const panels = new Map<TabName, HTMLElement>();
  const panelFor = (name: TabName, child: HTMLElement): HTMLElement => {
    const panel = el("div", { class: "tab-panel", id: `panel-${name}` });
    panel.appendChild(child);
    panels.set(name, panel);
    return panel;
  };
  inputPanel.appendChild(panelFor("paste", pasteInput));
  const filePanel = panelFor("file", fileInput);
  filePanel.appendChild(
    el("p", { class: "hint" }, "The file is read in your browser and submitted as text."),
  );
  inputPanel.appendChild(filePanel);
  inputPanel.appendChild(panelFor("url", urlInput));

  const allowUnmapped = el("input", { id: "allow-unmapped", type: "checkbox" });
  const allowLabel = el("label", { class: "option" });
  allowLabel.appendChild(allowUnmapped);
  allowLabel.appendChild(doc.createTextNode(" Also add links without parameter mappings"));
  const submitButton = el("button", { id: "submit", type: "button" }, "Generate links");
  const controls = el("div", { class: "controls" });
  controls.appendChild(allowLabel);
  controls.appendChild(submitButton);
  inputPanel.appendChild(controls);

  const formError = el("p", { id: "form-error", class: "form-error", hidden: "" });
  inputPanel.appendChild(formError);
  root.appendChild(inputPanel);

  // --- results view ------------------------------------------------------
  const results = el("section", { id: "results", hidden: "" });

  const errorBox = el("div", { id: "error-box", class: "error-box", hidden: "" });
  const errorStatus = el("p", { id: "error-status", class: "error-status" });
  const errorMessage = el("p", { id: "error-message", class: "error-message" });
  const errorLocation = el("p", { id: "error-location", class: "error-location", hidden: "" });
  errorBox.appendChild(errorStatus);
  errorBox.appendChild(errorMessage);
  errorBox.appendChild(errorLocation);
  results.appendChild(errorBox);

  const success = el("div", { id: "success", hidden: "" });

  const statsPanel = el("div", { id: "stats", class: "stats-panel" });
  const statsHeadline = el("p", { id: "stats-headline", class: "stats-headline" });
  const statsDetails = el("ul", { id: "stats-details", class: "stats-details" });
  const perLinkList = el("ul", { id: "per-link", class: "per-link", hidden: "" });
  const warningsList = el("ul", { id: "warnings", class: "warnings", hidden: "" });
  statsPanel.appendChild(statsHeadline);
  statsPanel.appendChild(statsDetails);
  statsPanel.appendChild(perLinkList);
  statsPanel.appendChild(warningsList);
  success.appendChild(statsPanel);

  const zeroBanner = el("p", { id: "zero-banner", class: "banner", hidden: "" }, ZERO_LINKS_BANNER);
  success.appendChild(zeroBanner);

  const downloadLink = el("a", { id: "download", class: "button" }, "Download result");
  const analyzeToggle = el("input", { id: "analyze-toggle", type: "checkbox" });
  const analyzeLabel = el("label", { class: "option" });
  analyzeLabel.appendChild(analyzeToggle);
  analyzeLabel.appendChild(doc.createTextNode(" Show translatability analysis"));
  const toolbar = el("div", { class: "toolbar" });
  toolbar.appendChild(downloadLink);
  toolbar.appendChild(analyzeLabel);
  success.appendChild(toolbar);

  const diffView = el("pre", { id: "diff", class: "diff" });
  success.appendChild(diffView);

  const analysisBox = el("div", { id: "analysis", class: "analysis", hidden: "" });
  success.appendChild(analysisBox);

  results.appendChild(success);
  root.appendChild(results);

  // --- state -------------------------------------------------------------
  let activeTab: TabName = "paste";
  let lastSource: DocumentSource | null = null;
  let analysis: AnalyzeResponse | null = null;
  let current: Promise<void> = Promise.resolve();

  const show = (node: HTMLElement) => node.removeAttribute("hidden");
  const hide = (node: HTMLElement) => node.setAttribute("hidden", "");

  function selectTab(name: TabName): void {
    activeTab = name;
    for (const [tab, button] of tabButtons) {
      button.setAttribute("aria-selected", tab === name ? "true" : "false");
      button.classList.toggle("active", tab === name);
    }
    for (const [tab, panel] of panels) {
      if (tab === name) show(panel);
      else hide(panel);
    }
  }
  for (const [name, button] of tabButtons) {
    button.addEventListener("click", () => selectTab(name));
  }
  selectTab("paste");

  function setPending(on: boolean): void {
    submitButton.disabled = on;
    analyzeToggle.disabled = on;
  }

  /** Starts UI-triggered work immediately (so controls are disabled in the
   * same tick as the click) and remembers the promise for idle(). Overlap is
   * prevented by the disabled controls themselves. */
  function track(run: () => Promise<void>): Promise<void> {
    const next = run().catch(() => {});
    current = next;
    return next;
  }

  async function idle(): Promise<void> {
    let settled = current;
    do {
      settled = current;
      await settled;
    } while (settled !== current);
  }

  async function readSource(): Promise<{ value: DocumentSource } | { error: string }> {
    if (activeTab === "paste") {
      const text = pasteInput.value;
      if (text.trim() === "") return { error: "Paste a document before submitting." };
      return { value: { text } };
    }
    if (activeTab === "url") {
      const url = urlInput.value.trim();
      if (url === "") return { error: "Enter a URL before submitting." };
      return { value: { url } };
    }
    const file = fileInput.files && fileInput.files[0];
    if (!file) return { error: "Choose a file before submitting." };
    try {
      return { value: { text: await file.text() } };
    } catch (err) {
      return { error: `Could not read the file: ${err instanceof Error ? err.message : String(err)}` };
    }
  }

  function formatCount(count: number, noun: string): string {
    return `${count} ${noun}${count === 1 ? "" : "s"}`;
  }

  function renderError(err: unknown): void {
    hide(success);
    show(errorBox);
    show(results);
    if (err instanceof ApiError) {
      errorStatus.textContent = err.status > 0 ? `Error ${err.status}` : "Error";
      errorMessage.textContent = err.message;
      if (err.line !== undefined) {
        errorLocation.textContent =
          err.column !== undefined ? `Line ${err.line}, column ${err.column}` : `Line ${err.line}`;
        show(errorLocation);
      } else {
        hide(errorLocation);
      }
    } else {
      errorStatus.textContent = "Error";
      errorMessage.textContent = err instanceof Error ? err.message : String(err);
      hide(errorLocation);
    }
  }

  function renderSuccess(result: GenerateResponse): void {
    hide(errorBox);
    show(success);
    show(results);

    const stats = result.stats;
    statsHeadline.textContent = `${formatCount(stats.links_added, "link")} added`;

    statsDetails.textContent = "";
    const detailLines = [
      `${formatCount(stats.pairs_considered, "pair")} considered`,
      `${formatCount(stats.links_skipped_duplicate, "duplicate")} skipped`,
      `${formatCount(stats.parameters_mapped, "parameter")} mapped`,
      `${formatCount(stats.child_params_unmapped, "child parameter")} left unmapped`,
    ];
    for (const line of detailLines) statsDetails.appendChild(el("li", {}, line));

    perLinkList.textContent = "";
    if (stats.per_link.length > 0) {
      for (const record of stats.per_link) {
        perLinkList.appendChild(
          el(
            "li",
            {},
            `${record.parent} → ${record.child}: "${record.name}" (${formatCount(record.mapping_count, "mapping")})`,
          ),
        );
      }
      show(perLinkList);
    } else {
      hide(perLinkList);
    }

    warningsList.textContent = "";
    if (stats.warnings.length > 0) {
      for (const warning of stats.warnings) {
        warningsList.appendChild(el("li", {}, warning));
      }
      show(warningsList);
    } else {
      hide(warningsList);
    }

    if (stats.links_added === 0) {
      show(zeroBanner);
      renderDiff(diffView, "");
    } else {
      hide(zeroBanner);
      renderDiff(diffView, result.diff);
    }

    const isJson = result.document.trimStart().startsWith("{");
    downloadLink.setAttribute("download", isJson ? "openapi-linked.json" : "openapi-linked.yaml");
    const mediaType = isJson ? "application/json" : "application/yaml";
    downloadLink.setAttribute(
      "href",
      `data:${mediaType};charset=utf-8,${encodeURIComponent(result.document)}`,
    );

    analysisBox.textContent = "";
    hide(analysisBox);
  }

  function renderAnalysis(report: AnalyzeResponse): void {
    analysisBox.textContent = "";
    analysisBox.appendChild(el("h2", {}, "Translatability analysis"));

    const table = el("table", { id: "analysis-table" });
    const head = el("tr", {});
    head.appendChild(el("th", {}, "Property"));
    head.appendChild(el("th", {}, "Count"));
    table.appendChild(head);
    for (const [name, count] of Object.entries(report.property_counts)) {
      const row = el("tr", { "data-property": name });
      if (report.property_present[name]) row.classList.add("present");
      row.appendChild(el("td", {}, name));
      row.appendChild(el("td", {}, String(count)));
      table.appendChild(row);
    }
    analysisBox.appendChild(table);

    analysisBox.appendChild(el("h3", {}, "Operations with multiple success codes"));
    const multiList = el("ul", { id: "multi-success" });
    if (report.multi_success_operations.length === 0) {
      multiList.appendChild(el("li", { class: "none" }, "none"));
    } else {
      for (const op of report.multi_success_operations) {
        multiList.appendChild(
          el("li", {}, `${op.method.toUpperCase()} ${op.path} (${op.success_codes.join(", ")})`),
        );
      }
    }
    analysisBox.appendChild(multiList);

    analysisBox.appendChild(
      el("p", { id: "preexisting-links" }, `Pre-existing links: ${report.preexisting_link_count}`),
    );
    analysisBox.appendChild(
      el(
        "p",
        { id: "any-flagged" },
        `Any flagged property: ${report.has_any_flagged_property ? "yes" : "no"}`,
      ),
    );
    show(analysisBox);
  }

  function renderAnalysisError(err: unknown): void {
    analysisBox.textContent = "";
    const message = err instanceof Error ? err.message : String(err);
    analysisBox.appendChild(el("p", { class: "analysis-error" }, `Analysis failed: ${message}`));
    show(analysisBox);
  }

  async function fetchAnalysis(source: DocumentSource): Promise<void> {
    try {
      analysis = await api.analyze(source);
      renderAnalysis(analysis);
    } catch (err) {
      renderAnalysisError(err);
    }
  }

  async function submit(): Promise<void> {
    setPending(true);
    hide(formError);
    try {
      const source = await readSource();
      if ("error" in source) {
        formError.textContent = source.error;
        show(formError);
        return;
      }
      analysis = null;
      try {
        const result = await api.generate(source.value, {
          allowUnmapped: allowUnmapped.checked,
        });
        lastSource = source.value;
        renderSuccess(result);
        if (analyzeToggle.checked) await fetchAnalysis(source.value);
      } catch (err) {
        lastSource = null;
        renderError(err);
      }
    } finally {
      setPending(false);
    }
  }

  submitButton.addEventListener("click", () => {
    void track(submit);
  });

  analyzeToggle.addEventListener("change", () => {
    if (!analyzeToggle.checked) {
      hide(analysisBox);
      return;
    }
    if (analysis !== null) {
      renderAnalysis(analysis);
      return;
    }
    const source = lastSource;
    if (source === null) return;
    void track(async () => {
      setPending(true);
      try {
        await fetchAnalysis(source);
      } finally {
        setPending(false);
      }
    });
  });

  return { root, idle };
}
