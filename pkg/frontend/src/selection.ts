import { CatalogItem, Constraints, PlanPick } from "./api.js";

// Pure view state for one selection window. The UI can only express legal
// edits: adding beyond the item bound or stepping beyond the quantity bound
// is refused, and the running total is always the sum of the picks.
export class SelectionState {
  private readonly quantities = new Map<string, number>();
  private readonly byId = new Map<string, CatalogItem>();

  constructor(
    readonly pool: CatalogItem[],
    private readonly constraints: Constraints,
  ) {
    for (const item of pool) this.byId.set(item.id, item);
  }

  itemCount(): number {
    return this.quantities.size;
  }

  quantityOf(itemId: string): number {
    return this.quantities.get(itemId) ?? 0;
  }

  isSelected(itemId: string): boolean {
    return this.quantities.has(itemId);
  }

  canAdd(itemId: string): boolean {
    return (
      this.byId.has(itemId) &&
      !this.quantities.has(itemId) &&
      this.quantities.size < this.constraints.max_items_per_window
    );
  }

  add(itemId: string): boolean {
    if (!this.canAdd(itemId)) return false;
    this.quantities.set(itemId, 1);
    return true;
  }

  remove(itemId: string): void {
    this.quantities.delete(itemId);
  }

  increment(itemId: string): boolean {
    const current = this.quantities.get(itemId);
    if (current === undefined || current >= this.constraints.max_quantity_per_item) {
      return false;
    }
    this.quantities.set(itemId, current + 1);
    return true;
  }

  decrement(itemId: string): boolean {
    const current = this.quantities.get(itemId);
    if (current === undefined || current <= 1) return false;
    this.quantities.set(itemId, current - 1);
    return true;
  }

  setQuantity(itemId: string, quantity: number): boolean {
    if (!this.byId.has(itemId)) return false;
    if (quantity < 1 || quantity > this.constraints.max_quantity_per_item) return false;
    if (!this.quantities.has(itemId) && !this.canAdd(itemId)) return false;
    this.quantities.set(itemId, quantity);
    return true;
  }

  clear(): void {
    this.quantities.clear();
  }

  totalKcal(): number {
    let total = 0;
    for (const [id, qty] of this.quantities) {
      total += qty * (this.byId.get(id)?.kcal_per_unit ?? 0);
    }
    return total;
  }

  // A window is submittable when the item count is inside the bounds.
  isComplete(): boolean {
    const n = this.quantities.size;
    return (
      n >= this.constraints.min_items_per_window &&
      n <= this.constraints.max_items_per_window
    );
  }

  toPicks(): PlanPick[] {
    return [...this.quantities.entries()]
      .sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0))
      .map(([item_id, quantity]) => ({ item_id, quantity }));
  }
}
