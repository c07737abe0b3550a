// End-to-end round trip against the real annotation service. The suite
// ingests a one-video project into a temp directory, boots the Python server
// as a child process, and drives it through the same client the browser uses.
import { execFileSync, spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, mkdirSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { AnnotationApi } from "../src/api.js";
import { SessionController } from "../src/controller.js";
import { projectLabels, tileSegments } from "../src/time.js";

const PX = 8; // default view-model zoom, px per second
const PORT = 8900 + (process.pid % 500);
const BASE = `http://127.0.0.1:${PORT}`;

let projectDir: string;
let server: ChildProcess | null = null;

async function waitForHealth(): Promise<void> {
  for (let i = 0; i < 120; i += 1) {
    try {
      const res = await fetch(`${BASE}/health`, { signal: AbortSignal.timeout(1000) });
      if (res.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 250));
  }
  throw new Error(`service did not become healthy on ${BASE}`);
}

beforeAll(async () => {
  projectDir = mkdtempSync(join(tmpdir(), "jalign-ui-"));
  mkdirSync(join(projectDir, "media"));
  writeFileSync(join(projectDir, "media", "v130.mp4"), Buffer.alloc(4096, 7));
  writeFileSync(
    join(projectDir, "manifest.json"),
    JSON.stringify({
      schema_version: 1,
      videos: [
        {
          video_id: "v130",
          uri: "media/v130.mp4",
          duration_s: 130.0,
          age_band: "2-4",
          category: "daily_life",
        },
      ],
    }),
  );
  execFileSync(
    "python3",
    ["-m", "jalign", "--project", projectDir, "ingest", join(projectDir, "manifest.json")],
    { stdio: "pipe" },
  );
  server = spawn(
    "python3",
    ["-m", "jalign", "--project", projectDir, "serve", "--port", String(PORT)],
    { stdio: ["ignore", "pipe", "pipe"] },
  );
  await waitForHealth();
});

afterAll(async () => {
  if (server) {
    server.kill("SIGTERM");
    await new Promise((resolve) => {
      server!.once("exit", resolve);
      setTimeout(resolve, 3000);
    });
  }
  rmSync(projectDir, { recursive: true, force: true });
});

describe("annotation round trip", () => {
  const api = new AnnotationApi(BASE);

  it("serves 26 five-second segments for the 130 s video", async () => {
    const segments = await api.segments("v130");
    expect(segments).toHaveLength(26);
    expect(segments[0]).toMatchObject({ index: 0, start_s: 0, end_s: 5 });
    expect(segments[25]).toMatchObject({ index: 25, start_s: 125, end_s: 130 });

    // The local tiling mirror agrees with the server segment for segment.
    const mirror = tileSegments(130);
    segments.forEach((s, i) => {
      expect(mirror[i]).toMatchObject({ index: s.index, startS: s.start_s, endS: s.end_s });
    });
  });

  it("marks, saves, survives a stale write, submits, and projects correctly", async () => {
    const a = new SessionController(api);
    await a.load("slp1", "v130");
    const b = new SessionController(api);
    await b.load("slp1", "v130"); // same session, also at version 0

    // Rater drags Strong [3, 12) and Poor [20, 23) and saves.
    expect(a.vm!.dragCreateInterval(3 * PX, 12 * PX, "Strong").ok).toBe(true);
    expect(a.vm!.dragCreateInterval(20 * PX, 23 * PX, "Poor").ok).toBe(true);
    expect(await a.save()).toBe(true);
    expect(a.vm!.version).toBe(1);
    expect(a.vm!.dirty).toBe(false);

    // The second tab is now stale: its write must surface the conflict flow.
    expect(b.vm!.dragCreateInterval(60 * PX, 65 * PX, "Strong").ok).toBe(true);
    expect(await b.save()).toBe(false);
    expect(b.banner?.kind).toBe("conflict");
    if (b.banner?.kind === "conflict") {
      expect(b.banner.serverState.version).toBe(1);
      expect(b.banner.serverState.intervals).toHaveLength(2);
    }
    b.resolveConflictTakeServer();
    expect(b.vm!.version).toBe(1);
    expect(b.vm!.listMarks().map((m) => [m.startS, m.endS, m.kind])).toEqual([
      [3, 12, "Strong"],
      [20, 23, "Poor"],
    ]);
    expect(b.vm!.dirty).toBe(false);

    // Submit seals the session.
    expect(await a.submit()).toBe(true);
    expect(a.vm!.sealed).toBe(true);

    // Server projection: segments 0-2 Strong, segment 4 Poor, rest Moderate.
    const projection = await api.projection(a.session!.session_id);
    const labels = projection.labels.map((l) => l.label);
    expect(labels).toHaveLength(26);
    expect(labels.slice(0, 3)).toEqual(["Strong", "Strong", "Strong"]);
    expect(labels[3]).toBe("Moderate");
    expect(labels[4]).toBe("Poor");
    expect(labels.slice(5)).toEqual(Array(21).fill("Moderate"));

    // And it is exactly what the client predicted locally, which is in turn
    // exactly the shared interval-to-segment mapping.
    expect(a.vm!.projectionPreview()).toEqual(labels);
    const mirror = projectLabels(
      [
        { startS: 3, endS: 12, kind: "Strong" },
        { startS: 20, endS: 23, kind: "Poor" },
      ],
      tileSegments(130),
    );
    expect(mirror).toEqual(labels);
  });

  it("turns a write against the sealed session into the read-only flow", async () => {
    const b = new SessionController(api);
    await b.load("slp1", "v130");
    // load() of a sealed session arrives read-only already
    expect(b.vm!.sealed).toBe(true);
    expect(b.vm!.dragCreateInterval(60 * PX, 65 * PX, "Strong")).toMatchObject({
      ok: false,
      reason: "sealed",
    });

    // A stale client that still believes the session is open gets the
    // conflict flow from the server, then lands read-only too.
    const c = new SessionController(api);
    await c.load("slp1", "v130");
    c.vm!.sealed = false; // simulate a tab from before the submit
    expect(c.vm!.dragCreateInterval(60 * PX, 65 * PX, "Strong").ok).toBe(true);
    expect(await c.save()).toBe(false);
    expect(c.banner?.kind).toBe("conflict");
    expect(await c.resolveConflictKeepMine()).toBe(false);
    expect(c.vm!.sealed).toBe(true);
  });

  it("serves video bytes with range support for the player", async () => {
    const res = await fetch(api.mediaUrl("v130"), {
      headers: { Range: "bytes=0-99" },
    });
    expect(res.status).toBe(206);
    expect(res.headers.get("content-range")).toBe("bytes 0-99/4096");
    expect((await res.arrayBuffer()).byteLength).toBe(100);
  });
});
