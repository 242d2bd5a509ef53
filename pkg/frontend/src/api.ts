// Typed client for the search service JSON API. The token is attached as a
// bearer header once set; 401 responses surface as ApiError("auth_failure").

export interface SearchResult {
  doc_id: number;
  uri: string;
  title: string;
  score: number;
  base_strength: number;
}

export interface RegisterBody {
  username: string;
  password: string;
  address?: string;
  occupation?: string;
  qualification?: string;
  interests?: string[];
}

export interface ClickEvent {
  query: string;
  doc_id: number;
  clicked_at: number;
  left_at: number;
}

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function errorFrom(response: Response): Promise<ApiError> {
  let code = "unknown";
  let message = response.statusText;
  try {
    const body = (await response.json()) as { error?: string; message?: string };
    if (body.error) code = body.error;
    if (body.message) message = body.message;
  } catch {
    // non-JSON error body; keep the status text
  }
  return new ApiError(response.status, code, message);
}

export class ApiClient {
  token: string | null = null;

  constructor(
    private readonly fetchFn: FetchLike,
    private readonly base: string = "",
  ) {}

  private headers(json: boolean): Record<string, string> {
    const headers: Record<string, string> = {};
    if (json) headers["Content-Type"] = "application/json";
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    return headers;
  }

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const response = await this.fetchFn(this.base + path, init);
    if (!response.ok) throw await errorFrom(response);
    return response;
  }

  async register(body: RegisterBody): Promise<number> {
    const response = await this.request("/users", {
      method: "POST",
      headers: this.headers(true),
      body: JSON.stringify(body),
    });
    return ((await response.json()) as { user_id: number }).user_id;
  }

  async login(username: string, password: string): Promise<string> {
    const response = await this.request("/sessions", {
      method: "POST",
      headers: this.headers(true),
      body: JSON.stringify({ username, password }),
    });
    const token = ((await response.json()) as { token: string }).token;
    this.token = token;
    return token;
  }

  async search(q: string): Promise<SearchResult[]> {
    const response = await this.request(
      `/search?q=${encodeURIComponent(q)}`,
      { headers: this.headers(false) },
    );
    return (await response.json()) as SearchResult[];
  }

  async postEvent(event: ClickEvent): Promise<number> {
    const response = await this.request("/events", {
      method: "POST",
      headers: this.headers(true),
      body: JSON.stringify(event),
    });
    return ((await response.json()) as { event_id: number }).event_id;
  }
}
