// Single build-time API base URL. Tests and embedders may predefine
// FOODCAL_API_BASE on globalThis before the app modules load.
export const API_BASE: string =
  (globalThis as { FOODCAL_API_BASE?: string }).FOODCAL_API_BASE ??
  "http://127.0.0.1:8080";

export const TOKEN_STORAGE_KEY = "foodcal_token";
