import { describe, expect, it, vi } from "vitest";
import { ApiClient, ApiError } from "../src/api.js";

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

describe("ApiClient", () => {
  it("mints and remembers a token", async () => {
    const fetchImpl = vi.fn(async () => jsonResponse({ token: "a".repeat(32) }));
    const api = new ApiClient("http://game", fetchImpl);
    const token = await api.anonymousAuth();
    expect(token).toBe("a".repeat(32));
    expect(api.token).toBe(token);
    expect(fetchImpl).toHaveBeenCalledWith(
      "http://game/v1/auth/anonymous",
      expect.objectContaining({ method: "POST" }),
    );
  });

  it("attaches the bearer token to requests", async () => {
    const fetchImpl = vi.fn(async () => jsonResponse({ levels_tried: 0 }));
    const api = new ApiClient("http://game", fetchImpl);
    api.token = "t".repeat(32);
    await api.getProfile();
    const init = fetchImpl.mock.calls[0]?.[1] as RequestInit;
    expect((init.headers as Record<string, string>)["Authorization"])
      .toBe(`Bearer ${"t".repeat(32)}`);
  });

  it("serializes submissions as the documented body", async () => {
    const fetchImpl = vi.fn(async () => jsonResponse({ total_stars: 6 }));
    const api = new ApiClient("http://game", fetchImpl);
    const plan = {
      breakfast: [{ item_id: "rice", quantity: 2 }],
      lunch: [{ item_id: "dal", quantity: 1 }],
      dinner: [{ item_id: "fish", quantity: 1 }],
    };
    await api.submit(5, plan, plan);
    const [url, init] = fetchImpl.mock.calls[0] as [string, RequestInit];
    expect(url).toBe("http://game/v1/levels/5/submit");
    const body = JSON.parse(init.body as string);
    expect(body).toEqual({ male_plan: plan, female_plan: plan });
  });

  it("raises ApiError with the server's code and message", async () => {
    const fetchImpl = vi.fn(async () =>
      jsonResponse({ code: "illegal_pick", message: "quantity 11" }, 422));
    const api = new ApiClient("http://game", fetchImpl);
    const err = await api.getProfile().catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(422);
    expect(err.code).toBe("illegal_pick");
    expect(err.message).toContain("quantity 11");
  });

  it("wraps network failures", async () => {
    const fetchImpl = vi.fn(async () => {
      throw new TypeError("connect ECONNREFUSED");
    });
    const api = new ApiClient("http://game", fetchImpl);
    const err = await api.getMeta().catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.code).toBe("network");
  });

  it("builds hint URLs with the gender query", async () => {
    const fetchImpl = vi.fn(async () => jsonResponse({ projected_stars: 3 }));
    const api = new ApiClient("http://game", fetchImpl);
    await api.getHint(7, "female");
    expect(fetchImpl.mock.calls[0]?.[0]).toBe("http://game/v1/levels/7/hint?gender=female");
  });
});
