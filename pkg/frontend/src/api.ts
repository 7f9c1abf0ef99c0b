// Typed client for the game's v1 JSON API. All scoring comes from the
// server; this module never computes stars.

export interface Constraints {
  min_items_per_window: number;
  max_items_per_window: number;
  max_quantity_per_item: number;
}

export interface Meta {
  level_count: number;
  age_min: number;
  age_max: number;
  pass_threshold: number;
  hints_enabled: boolean;
  constraints: Constraints;
}

export interface CatalogItem {
  id: string;
  name: string;
  category: string;
  unit: string;
  kcal_per_unit: number;
}

export type Gender = "male" | "female";
export type Meal = "breakfast" | "lunch" | "dinner";

export interface LevelWindow {
  gender: Gender;
  meal: Meal;
  item_ids: string[];
}

export interface Level {
  level: number;
  age: number;
  seed: number;
  male_target: number;
  female_target: number;
  windows: LevelWindow[];
}

export interface PlanPick {
  item_id: string;
  quantity: number;
}

export type PlanBody = Record<Meal, PlanPick[]>;

export interface StarAward {
  gender: Gender;
  selected_kcal: number;
  required_kcal: number;
  stars: number;
}

export interface ProfileSummary {
  total_levels: number;
  levels_tried: number;
  levels_passed: number;
  total_attempts: number;
}

export interface SubmitResult {
  level: number;
  male: StarAward;
  female: StarAward;
  total_stars: number;
  passed: boolean;
  attempt_number: number;
  profile: ProfileSummary;
}

export interface Hint {
  gender: Gender;
  plan: PlanBody;
  day_total_kcal: number;
  target_kcal: number;
  projected_stars: number;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  token: string | null = null;

  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = {};
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    if (body !== undefined) headers["Content-Type"] = "application/json";
    let response: Response;
    try {
      response = await this.fetchImpl(`${this.baseUrl}${path}`, {
        method,
        headers,
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (err) {
      throw new ApiError(0, "network", `cannot reach the game server: ${String(err)}`);
    }
    if (!response.ok) {
      let code = "bad_request";
      let message = `${response.status}`;
      try {
        const payload = (await response.json()) as { code?: string; message?: string };
        code = payload.code ?? code;
        message = payload.message ?? message;
      } catch {
        // non-JSON error body; keep defaults
      }
      throw new ApiError(response.status, code, message);
    }
    return (await response.json()) as T;
  }

  async anonymousAuth(): Promise<string> {
    const { token } = await this.request<{ token: string }>("POST", "/v1/auth/anonymous");
    this.token = token;
    return token;
  }

  getMeta(): Promise<Meta> {
    return this.request<Meta>("GET", "/v1/meta");
  }

  getCatalog(): Promise<CatalogItem[]> {
    return this.request<CatalogItem[]>("GET", "/v1/catalog");
  }

  getLevel(n: number): Promise<Level> {
    return this.request<Level>("GET", `/v1/levels/${n}`);
  }

  submit(n: number, malePlan: PlanBody, femalePlan: PlanBody): Promise<SubmitResult> {
    return this.request<SubmitResult>("POST", `/v1/levels/${n}/submit`, {
      male_plan: malePlan,
      female_plan: femalePlan,
    });
  }

  getProfile(): Promise<ProfileSummary> {
    return this.request<ProfileSummary>("GET", "/v1/profile");
  }

  getHint(n: number, gender: Gender): Promise<Hint> {
    return this.request<Hint>("GET", `/v1/levels/${n}/hint?gender=${gender}`);
  }
}
