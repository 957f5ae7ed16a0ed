public class Answer {
    public static int smallestPower(int limit) {
        int power = 1;
        int doublings = 0;
        while (power < limit) {
            power = power * 2;
            doublings = doublings + 1;
        }
        return doublings;
    }
}
