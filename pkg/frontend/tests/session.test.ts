import { beforeEach, describe, expect, it, vi } from "vitest";
import { ApiClient, ApiError } from "../src/api.js";
import { TOKEN_STORAGE_KEY } from "../src/config.js";
import { ClientSession } from "../src/session.js";

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), { status });
}

describe("ClientSession", () => {
  beforeEach(() => {
    localStorage.clear();
  });

  it("mints exactly one token when none is stored", async () => {
    const fetchImpl = vi.fn(async () => jsonResponse({ token: "1".repeat(32) }));
    const api = new ApiClient("http://game", fetchImpl);
    const session = new ClientSession(api, localStorage);
    const first = await session.ensureToken();
    const second = await session.ensureToken();
    expect(first).toBe(second);
    expect(fetchImpl).toHaveBeenCalledTimes(1);
    expect(localStorage.getItem(TOKEN_STORAGE_KEY)).toBe(first);
  });

  it("reuses a stored token without calling auth", async () => {
    localStorage.setItem(TOKEN_STORAGE_KEY, "9".repeat(32));
    const fetchImpl = vi.fn(async () => jsonResponse({ token: "x" }));
    const api = new ApiClient("http://game", fetchImpl);
    const session = new ClientSession(api, localStorage);
    const token = await session.ensureToken();
    expect(token).toBe("9".repeat(32));
    expect(api.token).toBe(token);
    expect(fetchImpl).not.toHaveBeenCalled();
  });

  it("clears and re-authenticates on 401", async () => {
    localStorage.setItem(TOKEN_STORAGE_KEY, "dead".padEnd(32, "0"));
    const api = new ApiClient("http://game", vi.fn(async () =>
      jsonResponse({ token: "f".repeat(32) })));
    const session = new ClientSession(api, localStorage);
    let calls = 0;
    const result = await session.withAuth(async () => {
      calls += 1;
      if (calls === 1) throw new ApiError(401, "unknown_token", "unknown player token");
      return "profile";
    });
    expect(result).toBe("profile");
    expect(calls).toBe(2);
    expect(localStorage.getItem(TOKEN_STORAGE_KEY)).toBe("f".repeat(32));
  });

  it("propagates non-auth errors unchanged", async () => {
    localStorage.setItem(TOKEN_STORAGE_KEY, "a".repeat(32));
    const api = new ApiClient("http://game", vi.fn());
    const session = new ClientSession(api, localStorage);
    const err = await session
      .withAuth(async () => {
        throw new ApiError(422, "illegal_pick", "bad");
      })
      .catch((e) => e);
    expect(err.code).toBe("illegal_pick");
  });
});
