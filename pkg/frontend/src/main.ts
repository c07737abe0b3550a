// Entry point: pick rater and video from the query string, open the session.

import { AnnotationApi } from "./api.js";
import { SessionController } from "./controller.js";
import { mountAnnotationUi } from "./dom.js";

async function boot(): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const server = params.get("server") ?? "";
  const raterId = params.get("rater");
  const videoId = params.get("video");

  const root = document.getElementById("app");
  if (!root) return;

  const api = new AnnotationApi(server);

  if (!raterId || !videoId) {
    const videos = await api.listVideos();
    const rows = videos
      .map(
        (v) =>
          `<li><code>${v.video_id}</code> (${v.duration_s.toFixed(1)} s,` +
          ` ${v.segment_count} segments): add ?rater=&lt;you&gt;&amp;video=${v.video_id}</li>`,
      )
      .join("");
    root.innerHTML =
      `<h1>Annotation</h1><p>Pick a video and pass <code>?rater=&lt;id&gt;&amp;video=&lt;id&gt;</code>:</p>` +
      `<ul>${rows}</ul>`;
    return;
  }

  const ctrl = new SessionController(api);
  mountAnnotationUi(root, ctrl, api.mediaUrl(videoId));
  await ctrl.load(raterId, videoId);
  document.title = `${raterId} / ${videoId} annotation`;
}

void boot();
