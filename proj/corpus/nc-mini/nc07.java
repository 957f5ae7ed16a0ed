public class Answer {
    public static int countUp(int limit) {
        int count = 0;
        int sum = 0;
        while (count < limit) {
            count = count + 1;
            sum = sum + count;
        }
        return sum;
    }
}
