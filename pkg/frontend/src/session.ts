import { ApiClient, ApiError } from "./api.js";
import { TOKEN_STORAGE_KEY } from "./config.js";

// Token lifecycle: reuse the stored token for auto-login; mint exactly one
// anonymous identity when none is stored; drop it when the server stops
// recognizing it.
export class ClientSession {
  constructor(
    private readonly api: ApiClient,
    private readonly storage: Storage,
  ) {}

  storedToken(): string | null {
    try {
      return this.storage.getItem(TOKEN_STORAGE_KEY);
    } catch {
      return null;
    }
  }

  async ensureToken(): Promise<string> {
    const stored = this.storedToken();
    if (stored) {
      this.api.token = stored;
      return stored;
    }
    const token = await this.api.anonymousAuth();
    try {
      this.storage.setItem(TOKEN_STORAGE_KEY, token);
    } catch {
      // storage unavailable (private mode); session still works in-memory
    }
    return token;
  }

  clearToken(): void {
    this.api.token = null;
    try {
      this.storage.removeItem(TOKEN_STORAGE_KEY);
    } catch {
      // ignore
    }
  }

  // Run an authenticated call; a stale token is cleared and re-minted once.
  async withAuth<T>(call: () => Promise<T>): Promise<T> {
    await this.ensureToken();
    try {
      return await call();
    } catch (err) {
      if (err instanceof ApiError && err.status === 401) {
        this.clearToken();
        await this.ensureToken();
        return await call();
      }
      throw err;
    }
  }
}
