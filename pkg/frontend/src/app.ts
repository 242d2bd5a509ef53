// Single-page client for the personalized search loop: login, search, open
// results, measure dwell on return, and show the server's re-ranked order on
// the next identical search. The UI never reorders or filters results; DOM
// order always equals response order.

import { ApiClient, ApiError, SearchResult } from "./api.js";
import { DwellTracker } from "./dwell.js";

export interface TokenStorage {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
  removeItem(key: string): void;
}

export interface AppDeps {
  api: ApiClient;
  openLink: (uri: string) => void;
  nowMs: () => number;
  storage: TokenStorage;
}

const TOKEN_KEY = "persearch.token";

function must<T extends Element>(root: Document, id: string): T {
  const el = root.getElementById(id);
  if (!el) throw new Error(`missing #${id}`);
  return el as unknown as T;
}

export class App {
  readonly tracker = new DwellTracker();
  private eventQueue: Promise<void> = Promise.resolve();

  private loginView: HTMLElement;
  private searchView: HTMLElement;
  private loginError: HTMLElement;
  private registerStatus: HTMLElement;
  private searchStatus: HTMLElement;
  private resultsList: HTMLOListElement;

  constructor(
    private readonly root: Document,
    private readonly deps: AppDeps,
  ) {
    this.loginView = must(root, "login-view");
    this.searchView = must(root, "search-view");
    this.loginError = must(root, "login-error");
    this.registerStatus = must(root, "register-status");
    this.searchStatus = must(root, "search-status");
    this.resultsList = must(root, "results");

    must<HTMLFormElement>(root, "login-form").addEventListener("submit", (e) => {
      e.preventDefault();
      void this.login();
    });
    must<HTMLFormElement>(root, "register-form").addEventListener("submit", (e) => {
      e.preventDefault();
      void this.register();
    });
    must<HTMLFormElement>(root, "search-form").addEventListener("submit", (e) => {
      e.preventDefault();
      void this.search();
    });
    must<HTMLButtonElement>(root, "logout").addEventListener("click", () => {
      this.clearSession();
    });

    const saved = deps.storage.getItem(TOKEN_KEY);
    if (saved) {
      deps.api.token = saved;
      this.showSearchView();
    }
  }

  private nowSeconds(): number {
    return Math.floor(this.deps.nowMs() / 1000);
  }

  private input(id: string): HTMLInputElement {
    return must<HTMLInputElement>(this.root, id);
  }

  private showSearchView(): void {
    this.loginView.classList.add("hidden");
    this.searchView.classList.remove("hidden");
  }

  private showLoginView(message = ""): void {
    this.searchView.classList.add("hidden");
    this.loginView.classList.remove("hidden");
    this.loginError.textContent = message;
  }

  clearSession(message = ""): void {
    this.deps.api.token = null;
    this.deps.storage.removeItem(TOKEN_KEY);
    this.tracker.discard();
    this.resultsList.replaceChildren();
    this.searchStatus.textContent = "";
    this.showLoginView(message);
  }

  async login(): Promise<void> {
    const username = this.input("login-username").value.trim();
    const password = this.input("login-password").value;
    try {
      const token = await this.deps.api.login(username, password);
      this.deps.storage.setItem(TOKEN_KEY, token);
      this.loginError.textContent = "";
      this.showSearchView();
    } catch (err) {
      this.loginError.textContent =
        err instanceof ApiError ? "Invalid username or password." : "Login failed.";
    }
  }

  async register(): Promise<void> {
    const interests = this.input("reg-interests").value
      .split(",")
      .map((s) => s.trim())
      .filter(Boolean);
    try {
      await this.deps.api.register({
        username: this.input("reg-username").value.trim(),
        password: this.input("reg-password").value,
        address: this.input("reg-address").value.trim(),
        occupation: this.input("reg-occupation").value.trim(),
        qualification: this.input("reg-qualification").value.trim(),
        interests,
      });
      this.registerStatus.textContent = "Account created. You can log in now.";
    } catch (err) {
      this.registerStatus.textContent =
        err instanceof ApiError ? err.message : "Registration failed.";
    }
  }

  async search(): Promise<void> {
    const q = this.input("search-input").value;
    try {
      const results = await this.deps.api.search(q);
      this.renderResults(q, results);
    } catch (err) {
      if (err instanceof ApiError && err.status === 401) {
        this.clearSession("Session expired. Please log in again.");
        return;
      }
      this.searchStatus.textContent =
        err instanceof ApiError ? err.message : "Search failed.";
      this.resultsList.replaceChildren();
    }
  }

  private renderResults(query: string, results: SearchResult[]): void {
    this.resultsList.replaceChildren();
    if (results.length === 0) {
      this.searchStatus.textContent = "No matches.";
      return;
    }
    this.searchStatus.textContent = `${results.length} result(s)`;
    for (const result of results) {
      const item = this.root.createElement("li");
      const link = this.root.createElement("a");
      link.href = result.uri;
      link.textContent = result.title;
      link.dataset.docId = String(result.doc_id);
      link.addEventListener("click", (e) => {
        e.preventDefault();
        this.openResult(query, result);
      });
      const meta = this.root.createElement("span");
      meta.className = "meta";
      meta.textContent = ` ${result.uri} (weight ${result.score.toFixed(2)}, match ${result.base_strength})`;
      item.append(link, meta);
      this.resultsList.append(item);
    }
  }

  /** Open a result link and start (or restart) the single dwell timer. */
  openResult(query: string, result: SearchResult): void {
    this.tracker.start(query, result.doc_id, this.nowSeconds());
    this.deps.openLink(result.uri);
  }

  /** Called when the page regains focus/visibility: close the timer and
   * report the click with its dwell. Submissions are serialized and retried
   * once on network failure. */
  onReturn(): Promise<void> {
    const completed = this.tracker.finish(this.nowSeconds());
    if (!completed) return this.eventQueue;
    const event = {
      query: completed.query,
      doc_id: completed.docId,
      clicked_at: completed.clickedAt,
      left_at: completed.leftAt,
    };
    this.eventQueue = this.eventQueue.then(async () => {
      try {
        await this.deps.api.postEvent(event);
      } catch (err) {
        if (err instanceof ApiError) {
          if (err.status === 401) {
            this.clearSession("Session expired. Please log in again.");
          }
          return; // server rejected it; retrying would not help
        }
        try {
          await this.deps.api.postEvent(event); // one retry on network failure
        } catch {
          // dropped after the single retry
        }
      }
    });
    return this.eventQueue;
  }
}
