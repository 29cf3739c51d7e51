/** Anonymized seat labels. Other players appear as animals, never as
 * seat numbers or agent kinds. */

const ANIMALS = ["Fox", "Owl", "Bear", "Crane", "Otter", "Lynx"];

export function seatLabel(seat: number, ownSeat: number): string {
  if (seat === ownSeat) {
    return "you";
  }
  return ANIMALS[seat % ANIMALS.length] ?? `player ${seat}`;
}

export function dollars(cents: number): string {
  const sign = cents < 0 ? "-" : "";
  const abs = Math.abs(cents);
  return `${sign}$${Math.floor(abs / 100)}.${String(abs % 100).padStart(2, "0")}`;
}
