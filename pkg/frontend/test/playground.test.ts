// Scripted UI loop against a live service instance: load the fixture SERP,
// tune the profile, and check that every rendered verdict tracks the
// engine's decisions.

import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { get as httpGet } from "node:http";
import { tmpdir } from "node:os";
import { dirname, join, resolve } from "node:path";
import { fileURLToPath } from "node:url";
import { afterAll, beforeAll, beforeEach, describe, expect, it } from "vitest";

import { PlaygroundApp, bootstrap } from "../src/app.js";
import { DetoxApi } from "../src/api.js";
import { validateDraft } from "../src/profile.js";
import { BUCKET_EMOJI } from "../src/view.js";
import type { Profile } from "../src/types.js";

const here = dirname(fileURLToPath(import.meta.url));
const repoRoot = resolve(here, "..", "..");
const port = 8750 + Math.floor(Math.random() * 200);
const base = `http://127.0.0.1:${port}`;

let service: ChildProcess;

function probeHealth(): Promise<boolean> {
  // plain node http keeps retry noise out of the happy-dom fetch logger
  return new Promise((resolveProbe) => {
    const request = httpGet(`${base}/v1/health`, (response) => {
      response.resume();
      resolveProbe(response.statusCode === 200);
    });
    request.on("error", () => resolveProbe(false));
  });
}

async function waitForHealth(): Promise<void> {
  for (let attempt = 0; attempt < 200; attempt++) {
    if (await probeHealth()) return;
    await new Promise((resolveSleep) => setTimeout(resolveSleep, 250));
  }
  throw new Error("service did not come up");
}

async function resetProfile(): Promise<void> {
  const current = (await (await fetch(`${base}/v1/profile`)).json()) as Profile;
  const fresh: Profile = {
    sensitivity: 0,
    overrides: [],
    blacklist: [],
    blur_enabled: true,
    profanity_enabled: true,
    disabled_sites: [],
    version: current.version,
  };
  const response = await fetch(`${base}/v1/profile`, {
    method: "PUT",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(fresh),
  });
  if (!response.ok) throw new Error(`profile reset failed: ${response.status}`);
}

async function mountApp(): Promise<PlaygroundApp> {
  document.body.innerHTML = '<div id="app"></div>';
  const root = document.getElementById("app") as HTMLElement;
  const app = await bootstrap(root, base);
  await app.loadFixture();
  await app.whenIdle();
  return app;
}

function clickSave(app: PlaygroundApp): Promise<void> {
  (document.getElementById("dx-save") as HTMLElement).click();
  return app.whenIdle().then(() => app.saveProfile()).then(() => app.whenIdle());
}

beforeAll(async () => {
  const storeDir = mkdtempSync(join(tmpdir(), "detox-playground-"));
  service = spawn(
    "python3",
    [
      "-m", "detox", "serve",
      "--patterns-dir", join(repoRoot, "fixtures", "patterns"),
      "--profile-path", join(storeDir, "profile.json"),
      "--port", String(port),
    ],
    { cwd: repoRoot, stdio: "ignore" },
  );
  await waitForHealth();
});

afterAll(() => {
  service?.kill("SIGKILL");
});

beforeEach(async () => {
  await resetProfile();
});

describe("playground against a live service", () => {
  it("renders one placeholder card with the result's domain", async () => {
    const app = await mountApp();
    const cards = document.querySelectorAll('[data-detox="placeholder"]');
    expect(cards.length).toBe(1);
    const card = cards[0] as HTMLElement;
    expect(card.textContent).toContain("news-wire.example");
    expect(card.querySelector(".dx-placeholder-hint")).toBeTruthy();
    // flagged count shown from the engine's decisions
    expect(document.getElementById("dx-summary")!.textContent).toContain("flagged 1");
  });

  it("shows bucket emojis on kept results", async () => {
    await mountApp();
    const emojis = Array.from(document.querySelectorAll(".dx-emoji"));
    expect(emojis.length).toBeGreaterThanOrEqual(3);
    const neutral = emojis.find((e) => e.getAttribute("data-bucket") === "Neutral");
    expect(neutral?.textContent).toBe(BUCKET_EMOJI.Neutral);
    const positive = emojis.find((e) => e.getAttribute("data-bucket") === "StronglyPositive");
    expect(positive?.textContent).toBe(BUCKET_EMOJI.StronglyPositive);
  });

  it("adding a blacklist term and saving blurs the matching result", async () => {
    const app = await mountApp();
    expect(document.querySelector(".dx-blur")).toBeNull();

    (document.getElementById("dx-blacklist-term") as HTMLInputElement).value = "war";
    (document.getElementById("dx-blacklist-add") as HTMLElement).click();
    await clickSave(app);

    const blurred = document.querySelector(".dx-blur") as HTMLElement;
    expect(blurred).toBeTruthy();
    expect(blurred.textContent).toContain("Historic peace accord");
    // the verdict comes from the engine's decision list
    const decision = app.lastResponse!.decisions.find((d) => d.action === "Blur");
    expect(decision?.domain).toBe("world-briefs.example");
  });

  it("clicking a placeholder reinstates the original result", async () => {
    const app = await mountApp();
    const card = document.querySelector('[data-detox="placeholder"]') as HTMLElement;
    expect(card).toBeTruthy();
    card.click();
    await app.whenIdle();

    expect(document.querySelector('[data-detox="placeholder"]')).toBeNull();
    expect(document.getElementById("dx-doc")!.textContent).toContain(
      "Bad news grips markets",
    );
  });

  it("reinstates persist across a re-filter in the same session", async () => {
    const app = await mountApp();
    (document.querySelector('[data-detox="placeholder"]') as HTMLElement).click();
    await app.whenIdle();

    await app.refilter();
    await app.whenIdle();
    expect(document.querySelector('[data-detox="placeholder"]')).toBeNull();
    expect(document.getElementById("dx-doc")!.textContent).toContain(
      "Bad news grips markets",
    );
  });

  it("slider to -5 reduces the flagged count per the engine's decisions", async () => {
    const app = await mountApp();
    const flaggedBefore = app.lastResponse!.decisions.filter(
      (d) => d.action === "Placeholder",
    ).length;
    expect(flaggedBefore).toBe(1);

    const slider = document.getElementById("dx-sensitivity") as HTMLInputElement;
    slider.value = "-5";
    slider.dispatchEvent(new Event("input", { bubbles: true }));
    await clickSave(app);

    const flaggedAfter = app.lastResponse!.decisions.filter(
      (d) => d.action === "Placeholder",
    ).length;
    expect(flaggedAfter).toBeLessThan(flaggedBefore);
    expect(document.querySelector('[data-detox="placeholder"]')).toBeNull();
    expect(document.getElementById("dx-summary")!.textContent).toContain("flagged 0");
  });

  it("rejects an out-of-range sensitivity client-side without a PUT", async () => {
    const app = await mountApp();
    const before = (await (await fetch(`${base}/v1/profile`)).json()) as Profile;

    const sensitivity = document.getElementById("dx-sensitivity-value") as HTMLInputElement;
    sensitivity.value = "9";
    sensitivity.dispatchEvent(new Event("input", { bubbles: true }));
    await app.saveProfile();

    const errors = document.getElementById("dx-profile-errors")!;
    expect(errors.textContent).toContain("sensitivity");
    const after = (await (await fetch(`${base}/v1/profile`)).json()) as Profile;
    expect(after.version).toBe(before.version); // no PUT happened
  });

  it("recovers from a version conflict by reloading the stored profile", async () => {
    const app = await mountApp();
    // another writer bumps the version behind the UI's back
    await resetProfile();

    (document.getElementById("dx-blacklist-term") as HTMLInputElement).value = "covid";
    (document.getElementById("dx-blacklist-add") as HTMLElement).click();
    await app.saveProfile();
    await app.whenIdle();

    const notice = document.getElementById("dx-conflict") as HTMLElement;
    expect(notice.hidden).toBe(false);
    expect(notice.textContent).toContain("reloaded");
  });

  it("saved profile reproduces the same verdicts after a page reload", async () => {
    const app = await mountApp();
    (document.getElementById("dx-blacklist-term") as HTMLInputElement).value = "war";
    (document.getElementById("dx-blacklist-add") as HTMLElement).click();
    await clickSave(app);
    expect(document.querySelector(".dx-blur")).toBeTruthy();

    // simulate a reload: fresh app instance against the same stored profile
    const reloaded = await mountApp();
    expect(document.querySelector(".dx-blur")).toBeTruthy();
    const decision = reloaded.lastResponse!.decisions.find((d) => d.action === "Blur");
    expect(decision?.domain).toBe("world-briefs.example");
  });

  it("scan view warns with excerpts and respects disabled sites", async () => {
    const app = await mountApp();
    (document.getElementById("dx-blacklist-term") as HTMLInputElement).value = "covid";
    (document.getElementById("dx-blacklist-add") as HTMLElement).click();
    await clickSave(app);

    await app.runScan("daily covid case counts fall", "local-news.example");
    let result = document.getElementById("dx-scan-result")!;
    expect(result.querySelector(".dx-scan-warn")).toBeTruthy();
    expect(result.textContent).toContain("covid");

    (document.getElementById("dx-disabled-site") as HTMLInputElement).value =
      "local-news.example";
    (document.getElementById("dx-disabled-add") as HTMLElement).click();
    await clickSave(app);

    await app.runScan("daily covid case counts fall", "local-news.example");
    result = document.getElementById("dx-scan-result")!;
    expect(result.querySelector(".dx-scan-clear")).toBeTruthy();

    await app.runScan("", "local-news.example");
    expect(document.getElementById("dx-scan-result")!.querySelector(".dx-scan-clear")).toBeTruthy();
  });
});

describe("draft validation (pure)", () => {
  it("accepts a normal draft", () => {
    const { errors, profile } = validateDraft({
      sensitivity: "-2",
      overrides: [{ term: "Lockdown", score: "-5" }],
      blacklist: ["war"],
      blur_enabled: true,
      profanity_enabled: false,
      disabled_sites: ["Trusted.example"],
      version: 3,
    });
    expect(errors).toEqual([]);
    expect(profile).toMatchObject({
      sensitivity: -2,
      overrides: [{ term: "lockdown", score: -5 }],
      blacklist: [{ pattern: "war", is_raw_regex: false }],
      disabled_sites: ["trusted.example"],
      version: 3,
    });
  });

  it("collects all range errors", () => {
    const { errors, profile } = validateDraft({
      sensitivity: "9",
      overrides: [{ term: "", score: "12" }],
      blacklist: [" "],
      blur_enabled: true,
      profanity_enabled: true,
      disabled_sites: [""],
      version: 0,
    });
    expect(profile).toBeNull();
    expect(errors.length).toBeGreaterThanOrEqual(4);
  });

  it("api client surfaces structured errors", () => {
    const api = new DetoxApi(base);
    expect(api.baseUrl).toBe(base);
  });
});
