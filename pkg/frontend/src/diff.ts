/** Renders a unified diff as one element per line.
 *
 * The rendering is lossless by contract: joining the textContent of the
 * rendered `.diff-line` elements with "\n" reproduces the diff string
 * exactly (splitting and re-joining on "\n" is a bijection), so nothing
 * the service reported can be hidden or reflowed away. */

export function diffLineClass(line: string): string {
  if (line.startsWith("+++") || line.startsWith("---")) return "diff-meta";
  if (line.startsWith("@@")) return "diff-hunk";
  if (line.startsWith("+")) return "diff-add";
  if (line.startsWith("-")) return "diff-del";
  return "diff-context";
}

export function renderDiff(target: HTMLElement, diff: string): void {
  target.textContent = "";
  if (diff === "") return;
  const doc = target.ownerDocument;
  for (const line of diff.split("\n")) {
    const node = doc.createElement("div");
    node.className = `diff-line ${diffLineClass(line)}`;
    node.textContent = line;
    target.appendChild(node);
  }
}

/** Inverse of renderDiff; used by tests to check the lossless contract. */
export function reconstructDiff(scope: ParentNode): string {
  const lines = Array.from(scope.querySelectorAll<HTMLElement>(".diff-line"));
  return lines.map((node) => node.textContent ?? "").join("\n");
}
