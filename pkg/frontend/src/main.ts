// Browser wiring: one session per tab against the engine's HTTP endpoint,
// requests strictly serialized through the ViewState.

import { ViewState, vertexKey } from "./model.js";
import { degreeBadge, polyHtml, quiverSvg } from "./render.js";
import { SessionClient, Snapshot, Vertex, httpTransport } from "./protocol.js";

const $ = (id: string) => document.getElementById(id) as HTMLElement;

const client = new SessionClient(httpTransport("/api"), `tab-${Date.now()}`);
const view = new ViewState(client);

let busy = false;

async function serialized(action: () => Promise<unknown>): Promise<void> {
  if (busy) return;
  busy = true;
  try {
    await action();
    setStatus("");
  } catch (err) {
    setStatus(String(err));
  } finally {
    busy = false;
    redraw();
  }
}

function setStatus(text: string): void {
  $("status").textContent = text;
}

function redraw(): void {
  const snap = view.snapshot;
  if (!snap) return;
  const next = view.nextStep();
  $("quiver").innerHTML = quiverSvg(snap, view.selected ?? null);
  for (const g of Array.from(document.querySelectorAll("#quiver g.vertex"))) {
    const key = g.getAttribute("data-vertex")!;
    if (next && key === vertexKey(next)) g.classList.add("next-step");
    g.addEventListener("click", () => {
      const [i, r] = key.split(",").map(Number);
      void serialized(async () => {
        const result = await view.clickMutate([i, r]);
        if (result === null) setStatus(`(${i},${r}) is frozen - no request sent`);
        else await showVariable([i, r]);
      });
    });
  }
  $("stepinfo").textContent = view.sequenceName
    ? `${view.sequenceName}: step ${view.cursor}/${view.sequence.length}` +
      (next ? `, next ${vertexKey(next)}` : " (done)")
    : "";
  $("history").textContent = snap.history.map((v) => `(${v[0]},${v[1]})`).join(" ");
}

async function showVariable(v: Vertex): Promise<void> {
  const snap = view.snapshot;
  if (!snap) return;
  const info = snap.variables[vertexKey(v)];
  if (!info) return;
  $("varlabel").textContent = `variable at (${v[0]},${v[1]}) - ${info.terms} terms`;
  $("varpanel").innerHTML = polyHtml(info.poly);
  $("degree").innerHTML = degreeBadge(info.multidegree);
}

function wireControls(): void {
  $("start").addEventListener("click", () => {
    const type = ($("type") as HTMLInputElement).value || "D4";
    const node = Number(($("node") as HTMLInputElement).value || "2");
    void serialized(async () => {
      await view.start({ type, node });
      await view.loadSequence(`S_${node}`);
      view.selected = null;
    });
  });
  $("step").addEventListener("click", () =>
    serialized(async () => {
      const snap = await view.stepSequence();
      if (snap && view.selected) await showVariable(view.selected);
    }),
  );
  $("runall").addEventListener("click", () =>
    serialized(async () => {
      const snap = await view.runAll();
      if (snap && view.selected) await showVariable(view.selected);
    }),
  );
  $("undo").addEventListener("click", () =>
    serialized(async () => {
      await view.clickUndo();
      if (view.cursor > 0) view.cursor -= 1;
    }),
  );
}

wireControls();
void serialized(async () => {
  await view.start({ type: "D4", node: 2 });
  await view.loadSequence("S_2");
});
