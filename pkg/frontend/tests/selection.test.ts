import { describe, expect, it } from "vitest";
import { CatalogItem, Constraints } from "../src/api.js";
import { SelectionState } from "../src/selection.js";

const CONSTRAINTS: Constraints = {
  min_items_per_window: 1,
  max_items_per_window: 3,
  max_quantity_per_item: 10,
};

function item(id: string, kcal: number): CatalogItem {
  return { id, name: id, category: "curry", unit: "cup", kcal_per_unit: kcal };
}

const POOL = [
  item("rice", 130), item("roti", 85), item("dal", 160),
  item("fish", 145), item("milk", 150), item("mango", 150),
];

function fresh(): SelectionState {
  return new SelectionState(POOL, CONSTRAINTS);
}

describe("SelectionState", () => {
  it("starts empty with zero total", () => {
    const s = fresh();
    expect(s.itemCount()).toBe(0);
    expect(s.totalKcal()).toBe(0);
    expect(s.isComplete()).toBe(false);
  });

  it("adds items at quantity one", () => {
    const s = fresh();
    expect(s.add("rice")).toBe(true);
    expect(s.quantityOf("rice")).toBe(1);
    expect(s.totalKcal()).toBe(130);
    expect(s.isComplete()).toBe(true);
  });

  it("refuses a fourth item", () => {
    const s = fresh();
    s.add("rice");
    s.add("roti");
    s.add("dal");
    expect(s.canAdd("fish")).toBe(false);
    expect(s.add("fish")).toBe(false);
    expect(s.itemCount()).toBe(3);
  });

  it("refuses duplicates and foreign items", () => {
    const s = fresh();
    s.add("rice");
    expect(s.add("rice")).toBe(false);
    expect(s.add("pizza")).toBe(false);
  });

  it("steps quantities within 1..max", () => {
    const s = fresh();
    s.add("dal");
    for (let i = 0; i < 15; i++) s.increment("dal");
    expect(s.quantityOf("dal")).toBe(10);
    expect(s.increment("dal")).toBe(false);
    for (let i = 0; i < 15; i++) s.decrement("dal");
    expect(s.quantityOf("dal")).toBe(1);
    expect(s.decrement("dal")).toBe(false);
  });

  it("running total always equals the sum of picks", () => {
    const s = fresh();
    s.add("rice");
    s.add("milk");
    s.increment("rice");
    s.increment("rice");
    s.increment("milk");
    // 3x130 + 2x150
    expect(s.totalKcal()).toBe(690);
    s.remove("milk");
    expect(s.totalKcal()).toBe(390);
  });

  it("setQuantity respects bounds and item cap", () => {
    const s = fresh();
    s.add("rice");
    expect(s.setQuantity("rice", 7)).toBe(true);
    expect(s.setQuantity("rice", 11)).toBe(false);
    expect(s.setQuantity("rice", 0)).toBe(false);
    s.add("roti");
    s.add("dal");
    expect(s.setQuantity("fish", 2)).toBe(false); // would be a 4th item
    expect(s.totalKcal()).toBe(7 * 130 + 85 + 160);
  });

  it("serializes picks sorted by item id", () => {
    const s = fresh();
    s.add("roti");
    s.add("dal");
    s.setQuantity("dal", 3);
    expect(s.toPicks()).toEqual([
      { item_id: "dal", quantity: 3 },
      { item_id: "roti", quantity: 1 },
    ]);
  });

  it("honors an exact-three configuration", () => {
    const s = new SelectionState(POOL, {
      min_items_per_window: 3, max_items_per_window: 3, max_quantity_per_item: 2,
    });
    s.add("rice");
    s.add("roti");
    expect(s.isComplete()).toBe(false);
    s.add("dal");
    expect(s.isComplete()).toBe(true);
  });
});
