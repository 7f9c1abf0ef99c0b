import {
  ApiClient,
  ApiError,
  CatalogItem,
  Gender,
  Level,
  Meal,
  Meta,
  PlanBody,
  SubmitResult,
} from "./api.js";
import { API_BASE } from "./config.js";
import { SelectionState } from "./selection.js";
import { ClientSession } from "./session.js";

const MEALS: Meal[] = ["breakfast", "lunch", "dinner"];

type Props = Record<string, string | boolean | ((ev: Event) => void)>;

function el(tag: string, props: Props = {}, ...children: (Node | string)[]): HTMLElement {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(props)) {
    if (typeof value === "function") {
      node.addEventListener(key.replace(/^on/, ""), value);
    } else if (typeof value === "boolean") {
      if (value) node.setAttribute(key, "");
    } else {
      node.setAttribute(key, value);
    }
  }
  for (const child of children) {
    node.append(child);
  }
  return node;
}

export interface AppOptions {
  apiBase?: string;
  fetchImpl?: (input: string, init?: RequestInit) => Promise<Response>;
  storage?: Storage;
}

export class App {
  readonly api: ApiClient;
  readonly session: ClientSession;
  meta: Meta | null = null;
  catalog = new Map<string, CatalogItem>();

  private level: Level | null = null;
  private windows: SelectionState[] = [];
  private windowIndex = 0;
  private lastResult: SubmitResult | null = null;
  private chain: Promise<void> = Promise.resolve();

  constructor(
    private readonly root: HTMLElement,
    options: AppOptions = {},
  ) {
    this.api = new ApiClient(options.apiBase ?? API_BASE, options.fetchImpl);
    this.session = new ClientSession(this.api, options.storage ?? localStorage);
  }

  // Serialize UI-triggered async work; errors surface as banners. Tests
  // await flush() to observe the settled DOM.
  schedule(task: () => Promise<void>): void {
    this.chain = this.chain
      .then(task)
      .catch((err) => this.showError(err));
  }

  flush(): Promise<void> {
    return this.chain;
  }

  start(): void {
    this.schedule(async () => {
      await this.session.ensureToken();
      this.meta = await this.api.getMeta();
      const items = await this.api.getCatalog();
      this.catalog = new Map(items.map((item) => [item.id, item]));
      this.renderHome();
    });
  }

  private showError(err: unknown): void {
    const message =
      err instanceof ApiError ? `${err.code}: ${err.message}` : String(err);
    const existing = this.root.querySelector(".banner");
    existing?.remove();
    const banner = el(
      "div",
      { class: "banner", "data-testid": "error-banner", role: "alert" },
      el("span", {}, message),
      el("button", { class: "banner-dismiss", onclick: () => banner.remove() }, "Dismiss"),
    );
    this.root.prepend(banner);
  }

  private swap(...content: (Node | string)[]): void {
    this.root.replaceChildren(...content);
  }

  // ------------------------------------------------------------- home

  renderHome(): void {
    const menu = el("nav", { class: "menu" });
    const entries: [string, string, () => void][] = [
      ["Play", "play", () => this.openLevels()],
      ["How To Play", "howto", () => this.renderHowTo()],
      ["Profile", "profile", () => this.openProfile()],
      ["About", "about", () => this.renderAbout()],
      ["Quit", "quit", () => this.renderQuit()],
    ];
    for (const [label, id, action] of entries) {
      menu.append(
        el("button", { class: "menu-item", "data-testid": `menu-${id}`, onclick: action }, label),
      );
    }
    this.swap(
      el("header", { class: "title" }, el("h1", {}, "FoodCalorie"),
        el("p", { class: "tagline" }, "Plan a day of meals that hits the calorie target.")),
      menu,
    );
  }

  renderQuit(): void {
    this.swap(
      el("section", { class: "quit" },
        el("p", {}, "Thanks for playing. You can close this tab now."),
        el("button", { "data-testid": "back-home", onclick: () => this.renderHome() }, "Back to home"),
      ),
    );
  }

  // ------------------------------------------------------- how to play

  renderHowTo(): void {
    const steps = [
      "Every level plans one day of meals, breakfast, lunch and dinner, for a male and a female of the level's age.",
      "Each meal window offers six foods. There is always one rice and one bread, the staples; the other four vary.",
      "Drag a food into the plate (or press Add), then use + and − to set how many units: 100 g portions, pieces, glasses or cups.",
      "Pick one to three foods per window. The running calorie count updates as you go.",
      "Match the daily target shown at the top: the whole day within 5 kcal earns 3 stars, within 10 earns 2, within 20 earns 1.",
      "Stars from both genders add up; reach 4 of 6 to pass the level.",
    ];
    const list = el("ol", { class: "howto-steps" });
    for (const step of steps) list.append(el("li", {}, step));
    this.swap(
      el("section", { class: "howto", "data-testid": "howto" },
        el("h2", {}, "How to play"),
        list,
        el("button", { "data-testid": "back-home", onclick: () => this.renderHome() }, "Got it"),
      ),
    );
  }

  renderAbout(): void {
    this.swap(
      el("section", { class: "about" },
        el("h2", {}, "About"),
        el("p", {}, "FoodCalorie is a learning game about daily calorie needs. "
          + "It uses traditional Bangladeshi dishes and age- and gender-specific "
          + "daily targets, so planning a balanced day teaches real food values."),
        el("button", { "data-testid": "back-home", onclick: () => this.renderHome() }, "Back"),
      ),
    );
  }

  // ----------------------------------------------------------- profile

  openProfile(): void {
    this.schedule(async () => {
      const profile = await this.session.withAuth(() => this.api.getProfile());
      this.swap(
        el("section", { class: "profile", "data-testid": "profile" },
          el("h2", {}, "Profile"),
          el("p", { "data-testid": "profile-levels" }, `Levels: ${profile.total_levels}`),
          el("p", { "data-testid": "profile-tried" }, `Tried: ${profile.levels_tried}`),
          el("p", { "data-testid": "profile-passed" }, `Passed: ${profile.levels_passed}`),
          el("p", { "data-testid": "profile-attempts" }, `Total attempts: ${profile.total_attempts}`),
          el("button", { "data-testid": "back-home", onclick: () => this.renderHome() }, "Back"),
        ),
      );
    });
  }

  // ------------------------------------------------------- level grid

  openLevels(): void {
    this.schedule(async () => {
      const meta = this.meta ?? (await this.api.getMeta());
      this.meta = meta;
      const grid = el("div", { class: "level-grid" });
      for (let n = 1; n <= meta.level_count; n++) {
        const age = meta.age_min + n - 1;
        grid.append(
          el("button", {
            class: "level-cell",
            "data-testid": `level-${n}`,
            title: `Age ${age}`,
            onclick: () => this.openLevel(n),
          }, String(n)),
        );
      }
      this.swap(
        el("section", { class: "levels" },
          el("h2", {}, "Pick a level"),
          el("p", { class: "hint-text" }, "Each level plans meals for one age."),
          grid,
          el("button", { "data-testid": "back-home", onclick: () => this.renderHome() }, "Home"),
        ),
      );
    });
  }

  openLevel(n: number): void {
    this.schedule(async () => {
      const level = await this.session.withAuth(() => this.api.getLevel(n));
      const constraints = (this.meta ?? (await this.api.getMeta())).constraints;
      this.level = level;
      this.windows = level.windows.map((w) => {
        const pool = w.item_ids.map((id) => {
          const item = this.catalog.get(id);
          if (!item) throw new Error(`catalog is missing item ${id}`);
          return item;
        });
        return new SelectionState(pool, constraints);
      });
      this.windowIndex = 0;
      this.lastResult = null;
      this.renderPlay();
    });
  }

  // ------------------------------------------------------- play screen

  private currentGender(): Gender {
    return this.windowIndex < 3 ? "male" : "female";
  }

  private genderDayTotal(gender: Gender): number {
    const offset = gender === "male" ? 0 : 3;
    let total = 0;
    for (let i = offset; i < offset + 3; i++) total += this.windows[i]!.totalKcal();
    return total;
  }

  renderPlay(): void {
    const level = this.level;
    if (!level || this.windows.length !== 6) return;
    const windowMeta = level.windows[this.windowIndex]!;
    const state = this.windows[this.windowIndex]!;
    const gender = this.currentGender();
    const target = gender === "male" ? level.male_target : level.female_target;

    const title = `${windowMeta.gender} ${windowMeta.meal}`;
    const header = el("header", { class: "play-header" },
      el("h2", {}, `Level ${level.level} · age ${level.age}`),
      el("p", { class: "window-label", "data-testid": "window-label" },
        `Window ${this.windowIndex + 1} of 6: ${title}`),
      el("p", { class: "target", "data-testid": "daily-target" },
        `Daily target (${gender}, whole day): ${target} kcal`),
    );

    const pool = el("div", { class: "pool", "data-testid": "pool" });
    for (const item of state.pool) {
      const selected = state.isSelected(item.id);
      const card = el("div", {
        class: `food-card${selected ? " selected" : ""}`,
        draggable: true,
        "data-item": item.id,
        ondragstart: (ev) => {
          (ev as DragEvent).dataTransfer?.setData("text/plain", item.id);
        },
      },
        el("span", { class: "food-name" }, item.name),
        el("span", { class: "food-kcal" }, `${item.kcal_per_unit} kcal / ${unitLabel(item.unit)}`),
        el("button", {
          class: "add",
          "data-testid": `add-${item.id}`,
          disabled: selected || !state.canAdd(item.id),
          onclick: () => {
            if (state.add(item.id)) this.renderPlay();
          },
        }, selected ? "Added" : "Add"),
      );
      pool.append(card);
    }

    const plate = el("div", {
      class: "plate",
      "data-testid": "plate",
      ondragover: (ev) => ev.preventDefault(),
      ondrop: (ev) => {
        ev.preventDefault();
        const id = (ev as DragEvent).dataTransfer?.getData("text/plain");
        if (id && state.add(id)) this.renderPlay();
      },
    });
    if (state.itemCount() === 0) {
      plate.append(el("p", { class: "plate-empty" }, "Drag foods here or press Add."));
    }
    for (const pick of state.toPicks()) {
      const item = this.catalog.get(pick.item_id)!;
      plate.append(
        el("div", { class: "plate-row", "data-item": pick.item_id },
          el("span", { class: "food-name" }, item.name),
          el("button", {
            class: "step",
            "data-testid": `dec-${pick.item_id}`,
            onclick: () => {
              if (state.decrement(pick.item_id)) this.renderPlay();
            },
          }, "−"),
          el("span", { class: "qty", "data-testid": `qty-${pick.item_id}` }, String(pick.quantity)),
          el("button", {
            class: "step",
            "data-testid": `inc-${pick.item_id}`,
            onclick: () => {
              if (state.increment(pick.item_id)) this.renderPlay();
            },
          }, "+"),
          el("span", { class: "row-kcal" }, `${pick.quantity * item.kcal_per_unit} kcal`),
          el("button", {
            class: "remove",
            "data-testid": `remove-${pick.item_id}`,
            onclick: () => {
              state.remove(pick.item_id);
              this.renderPlay();
            },
          }, "Remove"),
        ),
      );
    }

    const totals = el("p", { class: "totals", "data-testid": "running-total" },
      `This window: ${state.totalKcal()} kcal · ${gender} day so far: `
      + `${this.genderDayTotal(gender)} / ${target} kcal`);

    const nav = el("div", { class: "play-nav" });
    nav.append(el("button", {
      "data-testid": "prev-window",
      onclick: () => {
        if (this.windowIndex === 0) this.openLevels();
        else {
          this.windowIndex -= 1;
          this.renderPlay();
        }
      },
    }, this.windowIndex === 0 ? "Back to levels" : "Previous window"));

    if (this.meta?.hints_enabled) {
      nav.append(el("button", {
        "data-testid": "hint",
        onclick: () => this.applyHint(gender),
      }, `Use hint (${gender})`));
    }

    const last = this.windowIndex === 5;
    nav.append(el("button", {
      class: "primary",
      "data-testid": last ? "submit-day" : "next-window",
      onclick: () => {
        if (last) this.submit();
        else {
          this.windowIndex += 1;
          this.renderPlay();
        }
      },
    }, last ? "Submit day plans" : "Next window"));

    this.swap(header, totals, plate, pool, nav);
  }

  applyHint(gender: Gender): void {
    this.schedule(async () => {
      const level = this.level;
      if (!level) return;
      const hint = await this.session.withAuth(() => this.api.getHint(level.level, gender));
      const offset = gender === "male" ? 0 : 3;
      MEALS.forEach((meal, i) => {
        const state = this.windows[offset + i]!;
        state.clear();
        for (const pick of hint.plan[meal]) {
          state.add(pick.item_id);
          state.setQuantity(pick.item_id, pick.quantity);
        }
      });
      this.renderPlay();
    });
  }

  submit(): void {
    this.schedule(async () => {
      const level = this.level;
      if (!level) return;
      const incomplete = this.windows.findIndex((w) => !w.isComplete());
      if (incomplete >= 0) {
        this.windowIndex = incomplete;
        this.renderPlay();
        this.showError(new Error(
          `window ${incomplete + 1} needs between 1 and 3 foods before submitting`));
        return;
      }
      const plan = (offset: number): PlanBody => ({
        breakfast: this.windows[offset]!.toPicks(),
        lunch: this.windows[offset + 1]!.toPicks(),
        dinner: this.windows[offset + 2]!.toPicks(),
      });
      const result = await this.session.withAuth(() =>
        this.api.submit(level.level, plan(0), plan(3)));
      this.lastResult = result;
      this.renderSummary();
    });
  }

  // ----------------------------------------------------------- summary

  renderSummary(): void {
    const result = this.lastResult;
    const level = this.level;
    if (!result || !level) return;
    const award = (label: string, a: SubmitResult["male"]) =>
      el("div", { class: "award", "data-testid": `award-${label}` },
        el("h3", {}, label),
        el("p", { class: "stars", "data-testid": `stars-${label}` },
          "★".repeat(a.stars) + "☆".repeat(3 - a.stars)),
        el("p", {}, `${a.selected_kcal} kcal selected · ${a.required_kcal} kcal required`),
      );
    this.swap(
      el("section", { class: "summary", "data-testid": "summary" },
        el("h2", {}, `Level ${result.level} result`),
        award("male", result.male),
        award("female", result.female),
        el("p", { class: "total-stars", "data-testid": "total-stars" },
          `Total stars: ${result.total_stars} of 6`),
        el("p", {
          class: result.passed ? "passed" : "failed",
          "data-testid": "pass-state",
        }, result.passed ? "Level passed!" : "Not passed. 4 stars pass a level."),
        el("p", { class: "attempts" }, `Attempt #${result.attempt_number}`),
        el("div", { class: "summary-nav" },
          el("button", { "data-testid": "retry-level", onclick: () => this.openLevel(level.level) }, "Retry level"),
          el("button", { "data-testid": "to-levels", onclick: () => this.openLevels() }, "Level list"),
          el("button", { "data-testid": "back-home", onclick: () => this.renderHome() }, "Home"),
        ),
      ),
    );
  }
}

function unitLabel(unit: string): string {
  switch (unit) {
    case "g100":
      return "100 g";
    case "piece":
      return "piece";
    case "glass":
      return "glass";
    case "cup":
      return "cup";
    default:
      return unit;
  }
}
